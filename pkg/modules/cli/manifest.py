"""
Manifest documents: a chart (n, π, codim) plus task parameters, as UTF-8 JSON.

    {"n": 3, "codim": 1,
     "poisson": [{"indices": [1, 2], "coeff": "z3"}, ...],
     "degree": 2, "order": 4, "forms": [[{"indices": [1], "coeff": "1"}]]}
"""

import json
import logging
from dataclasses import dataclass, field

from modules.polycalc.calculus import PVF, Form
from modules.polycalc.coiso import CoisoSetup
from modules.polycalc.grammar import PolyParseError

logger = logging.getLogger(__name__)

INT_FIELDS = ("degree", "order", "arity", "t_degree", "samples", "seed", "cap")
KNOWN_FIELDS = {"n", "codim", "poisson", "fields", "forms", "omega", "fixture", "carrier", *INT_FIELDS}
CARRIERS = ("normal", "polyvector", "coisotropic", "koszul")


@dataclass
class Manifest:
    n: int = None
    codim: int = 0
    poisson: PVF = None
    options: dict = field(default_factory=dict)

    @property
    def setup(self):
        if self.n is None:
            raise ValueError("manifest has no chart: 'n' is missing")
        return CoisoSetup(self.n, self.codim, self.poisson)

    def get(self, key, default=None):
        return self.options.get(key, default)

    def to_json(self):
        doc = dict(self.options)
        if self.n is not None:
            doc.update(n=self.n, codim=self.codim, poisson=self.poisson.to_json())
        return doc


def _int(doc, key, minimum=None):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"'{key}' must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValueError(f"'{key}' must be at least {minimum}, got {value}")
    return value


def _located(where, e):
    """Prefix a grammar error with the manifest path of the offending string."""
    if isinstance(e, PolyParseError):
        return PolyParseError(f"{where}: {e.message}", line=e.line, column=e.column)
    return ValueError(f"{where}: {e}")


def _bivector(entries, n):
    if not isinstance(entries, list):
        raise ValueError("'poisson' must be a list of {indices, coeff} entries")
    for k, entry in enumerate(entries):
        indices = entry.get("indices", []) if isinstance(entry, dict) else None
        if not isinstance(indices, list) or len(indices) != 2:
            raise ValueError(f"poisson[{k}]: a bivector component needs exactly two indices")
        if indices[0] == indices[1]:
            raise ValueError(f"poisson[{k}]: repeated index in {indices}")
    try:
        return PVF.from_json(entries, n)
    except ValueError as e:
        raise _located("poisson", e) from e


def _form_list(value, n, where):
    if not isinstance(value, list):
        raise ValueError(f"'{where}' must be a list of {{indices, coeff}} entries")
    try:
        return Form.from_json(value, n).to_json()
    except ValueError as e:
        raise _located(where, e) from e


def from_document(doc):
    if not isinstance(doc, dict):
        raise ValueError("a manifest must be a JSON object")
    unknown = sorted(set(doc) - KNOWN_FIELDS)
    if unknown:
        raise ValueError(f"unknown manifest fields: {', '.join(unknown)}")

    m = Manifest()
    if "n" in doc:
        m.n = _int(doc, "n", 1)
        m.codim = _int(doc, "codim", 0) if "codim" in doc else 0
        if m.codim > m.n:
            raise ValueError(f"codim {m.codim} exceeds n = {m.n}")
        m.poisson = _bivector(doc.get("poisson", []), m.n)
    elif "poisson" in doc or "codim" in doc:
        raise ValueError("'poisson' and 'codim' need the chart dimension 'n'")

    opts = m.options
    for key in INT_FIELDS:
        if key in doc:
            opts[key] = _int(doc, key, 0)
    if "fixture" in doc:
        if not isinstance(doc["fixture"], str) or not doc["fixture"]:
            raise ValueError("'fixture' must be a fixture name")
        opts["fixture"] = doc["fixture"]
    if "carrier" in doc:
        if doc["carrier"] not in CARRIERS:
            raise ValueError(f"'carrier' must be one of {', '.join(CARRIERS)}")
        opts["carrier"] = doc["carrier"]
    for key in ("fields", "forms", "omega"):
        if key in doc and m.n is None:
            raise ValueError(f"'{key}' needs the chart dimension 'n'")
    if "fields" in doc:
        if not isinstance(doc["fields"], list):
            raise ValueError("'fields' must be a list of polyvector fields")
        try:
            opts["fields"] = [PVF.from_json(f, m.n).to_json() for f in doc["fields"]]
        except ValueError as e:
            raise _located("fields", e) from e
    if "forms" in doc:
        if not isinstance(doc["forms"], list):
            raise ValueError("'forms' must be a list of forms")
        opts["forms"] = [_form_list(f, m.n, f"forms[{k}]") for k, f in enumerate(doc["forms"])]
    if "omega" in doc:
        opts["omega"] = _form_list(doc["omega"], m.n, "omega")
    return m


def parse_manifest(text):
    """Validated Manifest from JSON text; syntax errors carry the line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PolyParseError(f"manifest is not valid JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    m = from_document(doc)
    logger.debug(f"Parsed manifest with fields {sorted(doc)}")
    return m


def serialize_manifest(m):
    return json.dumps(m.to_json(), sort_keys=True, indent=2, ensure_ascii=False)
