import logging
from flask import request, jsonify

from modules.cli import bp
from modules.cli.manifest import parse_manifest
from modules.cli.tasks import COMMANDS, run
from modules.tot_cech.linalg import InvariantViolation

logger = logging.getLogger(__name__)


@bp.route("/commands", methods=["GET"])
def list_commands():
    return jsonify(sorted(COMMANDS))


@bp.route("/run/<command>", methods=["POST"])
def run_command(command):
    if command not in COMMANDS:
        return jsonify({"error": f"Unknown command: {command}"}), 404

    text = request.get_data(as_text=True)
    if not text.strip():
        return jsonify({"error": "No manifest provided"}), 400

    overrides = {k: request.args.get(k, type=int) for k in ("degree", "order", "arity")}
    try:
        manifest = parse_manifest(text)
        report = run(command, manifest, overrides)
    except FileNotFoundError as e:
        return jsonify({"error": str(e)}), 404
    except (KeyError, TypeError, ValueError) as e:
        logger.exception(f"Invalid manifest for {command}")
        return jsonify({"error": str(e)}), 400
    except InvariantViolation as e:
        logger.exception(f"Invariant violated while running {command}")
        return jsonify({"error": str(e)}), 500

    return jsonify(report)
