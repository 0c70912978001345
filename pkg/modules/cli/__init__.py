from flask import Blueprint

bp = Blueprint(
    'cli',
    __name__,
)

from modules.cli import routes
