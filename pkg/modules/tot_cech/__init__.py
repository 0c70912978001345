from flask import Blueprint

bp = Blueprint(
    'tot_cech',
    __name__,
)

from modules.tot_cech import routes
