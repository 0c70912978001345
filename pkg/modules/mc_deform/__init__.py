from flask import Blueprint

bp = Blueprint(
    'mc_deform',
    __name__,
)

from modules.mc_deform import routes
