import json
import logging
from flask import request, jsonify, Response

from modules.mc_deform import bp
from modules.mc_deform.deform import (
    first_order_element, mc_extend_to, obstruction_space_basis, slice_window, t1_basis,
)
from modules.polycalc.coiso import CoisoSetup
from modules.settings import bounded, optional_bounded
from modules.tot_cech.linalg import InvariantViolation

logger = logging.getLogger(__name__)


def _slice_request(data):
    setup = CoisoSetup.from_json(data)
    degree = bounded("degree", data.get("degree", 0))
    return setup, degree, optional_bounded(data, "cap")


def _slice_payload(setup, degree, cap, basis):
    window, truncated = slice_window(setup, degree, cap)
    return {
        "degree": degree,
        "window": window,
        "truncated": truncated,
        "cap": cap if truncated else None,
        "dimension": len(basis),
        "basis": [b.to_json() for b in basis],
    }


@bp.route("/t1", methods=["POST"])
def t1():
    data = request.get_json(silent=True) or {}
    try:
        setup, degree, cap = _slice_request(data)
        basis = t1_basis(setup, degree, cap)
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid T1 request")
        return jsonify({"error": str(e)}), 400

    return jsonify(_slice_payload(setup, degree, cap, basis))


@bp.route("/obstructions", methods=["POST"])
def obstructions():
    data = request.get_json(silent=True) or {}
    try:
        setup, degree, cap = _slice_request(data)
        basis = obstruction_space_basis(setup, degree, cap)
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid obstruction request")
        return jsonify({"error": str(e)}), 400

    return jsonify(_slice_payload(setup, degree, cap, basis))


def _stream_extension(x, order):
    try:
        for report, _ in mc_extend_to(x, order):
            yield json.dumps({"type": "progress", **report}) + "\n"
        yield json.dumps({"type": "done"}) + "\n"
    except Exception as e:
        logger.exception("Extension failed")
        yield json.dumps({"type": "error", "message": str(e)}) + "\n"


@bp.route("/extend", methods=["POST"])
def extend():
    data = request.get_json(silent=True) or {}
    try:
        setup = CoisoSetup.from_json(data)
        order = bounded("order", data.get("order", 3))
        x = first_order_element(
            setup,
            field=data.get("field"),
            omega=data.get("omega"),
            kind=data.get("carrier", "normal"),
            cap=optional_bounded(data, "cap"),
        )
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid extension request")
        return jsonify({"error": str(e)}), 400
    except InvariantViolation as e:
        logger.exception("Invariant violated while building first-order data")
        return jsonify({"error": str(e)}), 500

    logger.info(f"Extending {x.carrier.name} data on C^{setup.nvars} to order {order}")
    return Response(_stream_extension(x, order), mimetype="application/x-ndjson")
