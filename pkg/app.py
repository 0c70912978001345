"""
coisocalc: Flask web application.
Exact holomorphic Poisson calculus on an affine chart.
"""

import logging
import os
import sys
from flask import Flask, jsonify

# Configure logging
logging.basicConfig(
    level=os.environ.get("COISOCALC_LOG_LEVEL", "INFO").upper(),
    stream=sys.stdout,
    format='[%(asctime)s] %(levelname)s in %(module)s: %(message)s'
)
logger = logging.getLogger(__name__)

app = Flask(__name__)
app.config['MAX_CONTENT_LENGTH'] = 1024 * 1024  # 1 MB manifest limit

# Register blueprints
from modules.polycalc import bp as polycalc_bp
from modules.mc_deform import bp as mc_deform_bp
from modules.tot_cech import bp as tot_cech_bp
from modules.linf_voronov import bp as linf_voronov_bp
from modules.cli import bp as cli_bp
from modules.cli.commands import cli
from modules.cli.tasks import COMMANDS, VERSION

app.register_blueprint(polycalc_bp, url_prefix='/polycalc')
app.register_blueprint(mc_deform_bp, url_prefix='/mc-deform')
app.register_blueprint(tot_cech_bp, url_prefix='/tot-cech')
app.register_blueprint(linf_voronov_bp, url_prefix='/linf-voronov')
app.register_blueprint(cli_bp, url_prefix='/cli')

app.cli.add_command(cli)


@app.route("/")
def home():
    logger.info("Index accessed")
    return jsonify({
        "library": "coisocalc",
        "version": VERSION,
        "modules": ["/polycalc", "/mc-deform", "/tot-cech", "/linf-voronov", "/cli"],
        "commands": sorted(COMMANDS),
    })


if __name__ == "__main__":
    app.run(host="0.0.0.0", port=5000, debug=False)
