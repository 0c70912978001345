"""Batch entry point: python coisocalc.py <command> --manifest <path>."""

from modules.cli.commands import cli

if __name__ == "__main__":
    cli()
