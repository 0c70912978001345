"""
Batch tasks behind the coisocalc commands. Each task maps a validated
Manifest and merged settings to a JSON-ready result dict; run() wraps it in
a deterministic Report.
"""

import logging
import random

from modules.linf_voronov.abelian import check_abelianity, koszul_witness
from modules.linf_voronov.verify import bracket_table, linf_verify
from modules.linf_voronov.splitgla import SplitGLA
from modules.mc_deform.deform import (
    first_order_element, mc_extend_to, obstruction_space_basis, slice_window, t1_basis,
)
from modules.polycalc.calculus import PVF, Form
from modules.polycalc.coiso import (
    anchor, coisotropy_characterizations, ideal_generators, in_IZ, is_coisotropic, is_poisson, koszul,
    lichnerowicz,
)
from modules.settings import DEFAULT_SETTINGS, REQUIRED_SETTINGS, bounded
from modules.tot_cech.dgla import load_fixture
from modules.tot_cech.verify import tot_verify

logger = logging.getLogger(__name__)

VERSION = "1.0.0"

SETTING_KEYS = ("degree", "order", "cap", *DEFAULT_SETTINGS)


def _parse_settings(raw, command=None):
    """Defaults merged with raw; out-of-range values and missing caps of unbounded commands raise ValueError."""
    s = dict(DEFAULT_SETTINGS)
    for key, value in (raw or {}).items():
        if value is not None:
            s[key] = bounded(key, value)
    for key in REQUIRED_SETTINGS.get(command, ()):
        if s.get(key) is None:
            raise ValueError(f"{command} needs '{key}' in the manifest or on the command line")
    return s


def _fields(manifest):
    fields = manifest.get("fields")
    if not fields:
        raise ValueError("this command needs 'fields' in the manifest")
    return [PVF.from_json(f, manifest.n) for f in fields]


def _forms(manifest):
    forms = manifest.get("forms")
    if forms:
        return [Form.from_json(f, manifest.n) for f in forms]
    return [Form.basis(manifest.n, i) for i in range(1, manifest.n + 1)]


def form_pool(setup, samples, seed):
    """Seeded sample of homogeneous forms: z_i, dz_i, z_j dz_i and dz_i∧dz_j."""
    n = setup.nvars
    gens = setup.pi.ring.gens
    pool = [Form.function(n, g) for g in gens]
    pool += [Form.basis(n, i) for i in range(1, n + 1)]
    pool += [Form.basis(n, i) * gens[j - 1] for i in range(1, n + 1) for j in range(1, n + 1)]
    pool += [Form.basis(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return random.Random(seed).sample(pool, min(samples, len(pool)))


def _fixture(manifest):
    fixture = manifest.get("fixture")
    if not fixture:
        raise ValueError("this command needs 'fixture' in the manifest")
    return load_fixture(fixture)


# tasks

def check_poisson(manifest, settings):
    return {"result": is_poisson(manifest.setup.pi)}


def check_coisotropic(manifest, settings):
    setup = manifest.setup
    return {"result": is_coisotropic(setup), "characterizations": coisotropy_characterizations(setup)}


def lp_differential(manifest, settings):
    setup = manifest.setup
    out = []
    for xi in _fields(manifest):
        image = lichnerowicz(setup, xi)
        out.append({"field": xi.to_json(), "image": image.to_json(),
                    "squares_to_zero": lichnerowicz(setup, image).is_zero()})
    return {"results": out}


def anchor_task(manifest, settings):
    setup = manifest.setup
    return {"results": [{"form": a.to_json(), "image": anchor(setup, a).to_json()} for a in _forms(manifest)]}


def koszul_task(manifest, settings):
    setup = manifest.setup
    forms = _forms(manifest)
    out = []
    for i, a in enumerate(forms):
        for j in range(i, len(forms)):
            out.append({"pair": [i, j], "bracket": koszul(setup, a, forms[j]).to_json()})
    return {"results": out}


def h_check(manifest, settings):
    setup = manifest.setup
    witness = koszul_witness(setup)
    if manifest.get("forms"):
        spanning = _forms(manifest)
    else:
        spanning = form_pool(setup, settings["samples"], settings["seed"])
    subalgebra = None
    if setup.codim and is_coisotropic(setup):
        subalgebra = (ideal_generators(setup), lambda a: in_IZ(setup, a))
    report = check_abelianity(witness, spanning, subalgebra, nr_samples=spanning[:6])
    report["samples"] = len(spanning)
    return report


def _slices(manifest, settings, fn):
    """Per-window bases; a non-homogeneous π collapses every degree into the single window 0..cap."""
    setup = manifest.setup
    cap = settings.get("cap")
    slices, bases = {}, {}
    truncated = False
    for d in range(settings["degree"] + 1):
        label, truncated = slice_window(setup, d, cap)
        if label in slices:
            continue
        basis = fn(setup, d, cap)
        slices[label] = len(basis)
        bases[label] = [b.to_json() for b in basis]
    return {"dimension": sum(slices.values()), "slices": slices, "basis": bases,
            "truncated": truncated, "cap": cap if truncated else None}


def t1_task(manifest, settings):
    return _slices(manifest, settings, t1_basis)


def obstructions_task(manifest, settings):
    return _slices(manifest, settings, obstruction_space_basis)


def mc_extend_task(manifest, settings):
    setup = manifest.setup
    fields = manifest.get("fields")
    x = first_order_element(
        setup,
        field=fields[0] if fields else None,
        omega=manifest.get("omega"),
        kind=manifest.get("carrier", "normal"),
        cap=settings.get("cap"),
    )
    steps = []
    status = "extended"
    for report, lift in mc_extend_to(x, settings["order"]):
        steps.append(report)
        if lift is None:
            status = "obstructed"
    reached = steps[-1]["order"] + (1 if status == "extended" else 0) if steps else x.artin.order
    return {"status": status, "reached_order": reached, "steps": steps}


def derived_brackets_task(manifest, settings):
    S = SplitGLA.from_json(_fixture(manifest))
    S.validate()
    return {"name": S.name, "brackets": bracket_table(S, settings["arity"])}


def linf_verify_task(manifest, settings):
    return linf_verify(_fixture(manifest), settings["arity"], settings["t_degree"])


def tot_verify_task(manifest, settings):
    return tot_verify(_fixture(manifest), settings["t_degree"])


COMMANDS = {
    "check-poisson": check_poisson,
    "check-coisotropic": check_coisotropic,
    "lp-differential": lp_differential,
    "anchor": anchor_task,
    "koszul": koszul_task,
    "h-check": h_check,
    "t1": t1_task,
    "obstructions": obstructions_task,
    "mc-extend": mc_extend_task,
    "derived-brackets": derived_brackets_task,
    "linf-verify": linf_verify_task,
    "tot-verify": tot_verify_task,
}


def run(command, manifest, overrides=None):
    """Execute a command on a manifest; overrides take precedence over manifest settings."""
    task = COMMANDS.get(command)
    if task is None:
        raise ValueError(f"unknown command {command!r}")
    raw = {k: manifest.get(k) for k in SETTING_KEYS}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    settings = _parse_settings(raw, command)
    logger.info(f"Running {command} with settings {settings}")
    results = task(manifest, settings)
    logger.info(f"Finished {command}")
    return {
        "command": command,
        "inputs": manifest.to_json(),
        "results": results,
        "provenance": {"library": "coisocalc", "version": VERSION, "bounds": settings},
    }
