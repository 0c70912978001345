from flask import Blueprint

bp = Blueprint(
    'polycalc',
    __name__,
)

from modules.polycalc import routes
