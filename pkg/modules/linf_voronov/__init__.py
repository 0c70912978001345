from flask import Blueprint

bp = Blueprint(
    'linf_voronov',
    __name__,
)

from modules.linf_voronov import routes
