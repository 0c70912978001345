import os
import logging
from flask import request, jsonify

from modules.tot_cech import bp
from modules.tot_cech.dgla import FIXTURES_DIR
from modules.settings import optional_bounded
from modules.tot_cech.linalg import InvariantViolation
from modules.tot_cech.verify import tot_verify

logger = logging.getLogger(__name__)


@bp.route("/fixtures", methods=["GET"])
def list_fixtures():
    names = []
    if os.path.isdir(FIXTURES_DIR):
        names = sorted(f[:-5] for f in os.listdir(FIXTURES_DIR) if f.endswith(".json"))
    return jsonify(names)


@bp.route("/verify", methods=["POST"])
def verify():
    data = request.get_json(silent=True) or {}
    fixture = data.get("fixture")
    if not fixture:
        return jsonify({"error": "No fixture provided"}), 400
    if not isinstance(fixture, (str, dict)):
        return jsonify({"error": "fixture must be a name or an inline document"}), 400

    logger.info(f"Tot verification requested for {fixture if isinstance(fixture, str) else fixture.get('name', 'inline')}")

    try:
        report = tot_verify(fixture, optional_bounded(data, "t_degree"))
    except FileNotFoundError as e:
        return jsonify({"error": str(e)}), 404
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid fixture")
        return jsonify({"error": str(e)}), 400
    except InvariantViolation as e:
        logger.exception("Invariant violated during Tot verification")
        return jsonify({"error": str(e)}), 500

    return jsonify(report)
