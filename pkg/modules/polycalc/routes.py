import logging
from flask import request, jsonify

from modules.polycalc import bp
from modules.polycalc.calculus import PVF, schouten
from modules.polycalc.coiso import (
    CoisoSetup, coisotropy_characterizations, is_coisotropic, is_poisson, poisson_bracket,
)
from modules.polycalc.grammar import format_poly, parse_poly

logger = logging.getLogger(__name__)


@bp.route("/schouten", methods=["POST"])
def schouten_route():
    data = request.get_json(silent=True) or {}
    try:
        n = int(data["n"])
        xi = PVF.from_json(data.get("xi", []), n)
        eta = PVF.from_json(data.get("eta", []), n)
        result = schouten(xi, eta)
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid Schouten request")
        return jsonify({"error": str(e)}), 400

    return jsonify({"result": result.to_json()})


@bp.route("/poisson-bracket", methods=["POST"])
def poisson_bracket_route():
    data = request.get_json(silent=True) or {}
    try:
        setup = CoisoSetup.from_json(data)
        f = parse_poly(data.get("f", "0"), setup.nvars)
        g = parse_poly(data.get("g", "0"), setup.nvars)
        result = poisson_bracket(setup, f, g)
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid Poisson bracket request")
        return jsonify({"error": str(e)}), 400

    return jsonify({"result": format_poly(result)})


@bp.route("/check", methods=["POST"])
def check():
    data = request.get_json(silent=True) or {}
    try:
        setup = CoisoSetup.from_json(data)
        poisson = is_poisson(setup.pi)
        report = {"poisson": poisson}
        if poisson:
            report["coisotropic"] = is_coisotropic(setup)
            report["characterizations"] = coisotropy_characterizations(setup)
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid check request")
        return jsonify({"error": str(e)}), 400

    logger.info(f"Checked bivector on C^{setup.nvars} with codim {setup.codim}: {report}")
    return jsonify(report)
