"""Command-line entry point: per-stage subcommands plus a full pipeline
runner.

Summaries go to stdout, diagnostics to stderr, data only to files. Exit
codes: 0 on success, 1 on validation errors (including usage errors), 2 on
I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import CitenvError
from .pipeline import (
    PIPELINE_STAGES,
    STAGE_RUNNERS,
    config_from,
    load_config,
    run_pipeline,
)

_STAGE_HELP = {
    "dedup": "detect double-citations and write the edition-count report",
    "env": "select the 1%-threshold citation environment of the seed",
    "matrix": "assemble the environment citation matrix and shares",
    "factors": "decompose cited patterns into rotated factors",
    "graph": "build the cosine-similarity graph",
    "layout": "compute spring-model 2-D positions",
    "render": "write the Pajek file and the SVG drawing",
    "report": "recompute everything and emit the full report bundle",
    "pipeline": "run every stage in order",
}


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with code 1 on usage errors."""

    def error(self, message: str):  # noqa: D102 - argparse contract
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="flat key = value config file")
    sp.add_argument("--links", type=Path, help="journal-journal link table (CSV)")
    sp.add_argument("--refs", type=Path, help="per-document reference records (TSV)")
    sp.add_argument("--meta", type=Path, help="journal metadata (CSV)")
    sp.add_argument("--out", dest="out_dir", type=Path, help="output directory (default: out)")
    sp.add_argument("--seed", dest="seed_journal", help="seed journal name")
    sp.add_argument("--total", dest="total_cites", type=int, help="seed total citations")
    sp.add_argument("--self", dest="self_cites", type=int, help="seed self-citations")
    sp.add_argument("--intl", dest="intl_name", help="international edition name")
    sp.add_argument("--german", dest="german_name", help="German edition name")
    sp.add_argument(
        "--raw-counts",
        dest="use_corrected",
        action="store_const",
        const=False,
        help="build the matrix from raw link counts even when --refs is given",
    )
    sp.add_argument(
        "--include-diagonal",
        dest="include_diagonal",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="keep within-journal counts in correlations and cosines",
    )
    sp.add_argument(
        "--kaiser-normalize",
        dest="kaiser_normalize",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="normalize rows during the varimax sweeps",
    )
    sp.add_argument("--cosine-cutoff", dest="cosine_cutoff", type=float, help="edge cutoff")
    sp.add_argument("--loading-cutoff", dest="loading_cutoff", type=float, help="assignment cutoff")
    sp.add_argument("--edge-length", dest="edge_length", type=float, help="display edge length")
    sp.add_argument("--spring-constant", dest="spring_constant", type=float, help="spring scale")
    sp.add_argument("--layout-eps", dest="layout_eps", type=float, help="gradient threshold")
    sp.add_argument("--layout-max-outer", dest="layout_max_outer", type=int, help="iteration cap")
    sp.add_argument("--layout-seed", dest="layout_seed", type=int, help="placement RNG seed")
    sp.add_argument(
        "--distance-mode",
        dest="distance_mode",
        choices=("hops", "cosine"),
        help="graph distances: hop counts, or experimental (1 - cosine) weights",
    )


_CONFIG_KEYS = (
    "links", "refs", "meta", "out_dir", "seed_journal", "total_cites", "self_cites",
    "intl_name", "german_name", "use_corrected", "include_diagonal", "kaiser_normalize",
    "cosine_cutoff", "loading_cutoff", "edge_length", "spring_constant",
    "layout_eps", "layout_max_outer", "layout_seed", "distance_mode",
)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="citenv",
        description="Reconstruct and map a journal's local citation environment.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    for name in (*PIPELINE_STAGES, "report", "pipeline"):
        sp = sub.add_parser(name, help=_STAGE_HELP[name])
        _add_options(sp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("citenv: error: a command is required", file=sys.stderr)
        return 1
    try:
        file_values = load_config(args.config) if args.config else {}
        overrides = {key: getattr(args, key) for key in _CONFIG_KEYS}
        cfg = config_from(file_values, overrides)
        if args.command == "pipeline":
            for line in run_pipeline(cfg):
                print(line)
        else:
            print(STAGE_RUNNERS[args.command](cfg))
    except CitenvError as exc:
        print(f"citenv: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"citenv: i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
