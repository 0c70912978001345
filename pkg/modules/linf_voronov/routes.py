import logging
from flask import request, jsonify

from modules.linf_voronov import bp
from modules.linf_voronov.splitgla import SplitGLA
from modules.linf_voronov.verify import bracket_table, linf_verify
from modules.settings import bounded, optional_bounded
from modules.tot_cech.dgla import load_fixture
from modules.tot_cech.linalg import InvariantViolation

logger = logging.getLogger(__name__)


def _fixture_doc(data):
    fixture = data.get("fixture")
    if not fixture:
        raise KeyError("No fixture provided")
    if not isinstance(fixture, (str, dict)):
        raise ValueError("fixture must be a name or an inline document")
    return fixture if isinstance(fixture, dict) else load_fixture(fixture)


@bp.route("/derived-brackets", methods=["POST"])
def derived_brackets_route():
    data = request.get_json(silent=True) or {}
    try:
        S = SplitGLA.from_json(_fixture_doc(data))
        S.validate()
        arity = bounded("arity", data.get("arity", 3))
        table = bracket_table(S, arity)
    except FileNotFoundError as e:
        return jsonify({"error": str(e)}), 404
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid derived-bracket request")
        return jsonify({"error": str(e)}), 400

    logger.info(f"Derived brackets of {S.name} up to arity {arity}: {len(table)} nonzero entries")
    return jsonify({"name": S.name, "arity": arity, "brackets": table})


@bp.route("/verify", methods=["POST"])
def verify():
    data = request.get_json(silent=True) or {}
    try:
        doc = _fixture_doc(data)
        report = linf_verify(doc, bounded("arity", data.get("arity", 4)), optional_bounded(data, "t_degree"))
    except FileNotFoundError as e:
        return jsonify({"error": str(e)}), 404
    except (KeyError, TypeError, ValueError) as e:
        logger.exception("Invalid fixture")
        return jsonify({"error": str(e)}), 400
    except InvariantViolation as e:
        logger.exception("Invariant violated during derived-bracket verification")
        return jsonify({"error": str(e)}), 500

    return jsonify(report)
