"""
The coisocalc command group:

    coisocalc <command> --manifest <path> [--out <path>] [--degree D] [--order N] [--arity K]

Exit codes: 0 success, 2 parse or validation error, 3 internal invariant violation.
"""

import json
import logging
import os
import sys

import click

from modules.cli.manifest import parse_manifest
from modules.cli.tasks import COMMANDS, run
from modules.tot_cech.linalg import InvariantViolation

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_INTERNAL = 3


def render_report(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _configure_logging(verbose):
    level = logging.DEBUG if verbose else os.environ.get("COISOCALC_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='[%(asctime)s] %(levelname)s in %(module)s: %(message)s'
    )
    logging.getLogger().setLevel(level)


def _make_command(name):
    @click.command(name=name, help=f"Run {name} on a manifest.")
    @click.option("--manifest", "manifest_path", required=True, type=click.Path(dir_okay=False))
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
    @click.option("--degree", type=int, default=None, help="Coefficient-degree cap.")
    @click.option("--order", type=int, default=None, help="Artin order N.")
    @click.option("--arity", type=int, default=None, help="L∞ arity cap.")
    @click.option("--verbose", is_flag=True, default=False)
    def command(manifest_path, out_path, degree, order, arity, verbose):
        if verbose:
            _configure_logging(True)
        try:
            with open(manifest_path, encoding="utf-8") as fh:
                manifest = parse_manifest(fh.read())
            report = run(name, manifest, {"degree": degree, "order": order, "arity": arity})
        except InvariantViolation as e:
            logger.exception(f"Invariant violated while running {name}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)
        except (OSError, KeyError, ValueError) as e:
            logger.error(f"{name} failed: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INVALID)
        except Exception as e:
            logger.exception(f"Unexpected failure in {name}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)

        text = render_report(report)
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
            logger.info(f"Report written to {out_path}")
        else:
            click.echo(text, nl=False)

    return command


@click.group(name="coisocalc")
@click.option("--verbose", is_flag=True, default=False, help="Log at DEBUG level.")
def cli(verbose):
    """Exact holomorphic Poisson calculus on an affine chart."""
    _configure_logging(verbose)


for _name in COMMANDS:
    cli.add_command(_make_command(_name))
