"""``crossnet`` command line: analyze, rolling, compare, roles."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from crossnet.cluster import (
    DEFAULT_DENDRO_FACTOR,
    color_dendrogram,
    export_dot,
    export_newick,
    mst,
    single_link,
    threshold_L,
)
from crossnet.errors import CrossnetError, SplitOutOfRange
from crossnet.ingest import (
    PositionMatrix,
    classify_roles,
    compute_positions,
    format_roles,
    rank_by_magnitude,
    read_panel,
    slice_periods,
)
from crossnet.metric import distance_matrix
from crossnet.topology import (
    DEFAULT_WINDOW,
    TopologySummary,
    boolean_graph,
    redundancy,
    residuality,
    rolling_residuality,
)

FORMATS = ("csv", "json", "dot", "newick")


@dataclass(frozen=True)
class AnalysisConfig:
    input: Path
    out_dir: Path = Path(".")
    period_from: str | None = None
    period_to: str | None = None
    dendro_factor: float = DEFAULT_DENDRO_FACTOR
    window: int = DEFAULT_WINDOW
    top_k: int = 3
    formats: frozenset[str] = field(default_factory=lambda: frozenset(FORMATS))

    def __post_init__(self):
        if not 0.0 < self.dendro_factor <= 1.0:
            raise ValueError(f"--dendro-factor must lie in (0, 1], got {self.dendro_factor}")
        if self.window < 2:
            raise ValueError(f"--window must be at least 2, got {self.window}")
        if self.top_k < 0:
            raise ValueError(f"--top-k must be non-negative, got {self.top_k}")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ValueError(f"unknown formats: {', '.join(sorted(unknown))}")


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


def load_positions(config: AnalysisConfig) -> PositionMatrix:
    try:
        panel = read_panel(config.input)
    except OSError as exc:
        raise StageError("input", f"cannot read {config.input}: {exc.strerror or exc}") from None
    m = compute_positions(panel)
    if config.period_from or config.period_to:
        m = slice_periods(m, config.period_from or m.periods[0], config.period_to or m.periods[-1])
    return m


def analyze_outputs(m: PositionMatrix, config: AnalysisConfig) -> tuple[dict[str, str], TopologySummary]:
    """Render every analyze artifact for one period as ``{filename: text}``."""
    d = distance_matrix(m)
    linkage = single_link(d)
    L = threshold_L(linkage)
    tree = mst(d)
    M, S = redundancy(d, L)
    summary = TopologySummary(m.periods[0], m.periods[-1], d.size, L, M, S, residuality(d, L))
    roles = classify_roles(m)
    top_creditors, top_debtors = rank_by_magnitude(roles, config.top_k)
    highlights = [a.entity for a in top_creditors + top_debtors]

    files = {}
    if "csv" in config.formats:
        files["distances.csv"] = d.to_csv()
        files["linkage.csv"] = linkage.to_csv()
        files["clusters.csv"] = color_dendrogram(linkage, config.dendro_factor).to_csv()
        files["roles.csv"] = format_roles(roles)
    if "newick" in config.formats:
        files["dendrogram.nwk"] = export_newick(linkage) + "\n"
    if "dot" in config.formats:
        files["mst.dot"] = export_dot(tree, roles, highlights)
        files["boolean.dot"] = boolean_graph(d, L).to_dot()
    if "json" in config.formats:
        files["topology.json"] = summary.to_json()
    return files, summary


def write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            with open(out_dir / name, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        raise StageError("output", f"cannot write to {out_dir}: {exc.strerror or exc}") from None


def cmd_analyze(config: AnalysisConfig) -> TopologySummary:
    m = load_positions(config)
    files, summary = analyze_outputs(m, config)
    write_outputs(config.out_dir, files)
    return summary


def cmd_rolling(config: AnalysisConfig):
    m = load_positions(config)
    series = rolling_residuality(m, config.window)
    write_outputs(config.out_dir, {"residuality.csv": series.to_csv()})
    return series


def cmd_compare(config: AnalysisConfig, split: str) -> dict:
    """Analyze ``[start, split]`` and ``[split, end]``; the split quarter belongs to both."""
    m = load_positions(config)
    if split not in m.periods[1:-1]:
        raise SplitOutOfRange(
            f"split {split} must lie strictly inside {m.periods[0]}..{m.periods[-1]}"
        )
    halves = [slice_periods(m, m.periods[0], split), slice_periods(m, split, m.periods[-1])]
    summaries = []
    for half in halves:
        files, summary = analyze_outputs(half, config)
        write_outputs(config.out_dir / f"{half.periods[0]}_{half.periods[-1]}", files)
        summaries.append(summary)
    first, second = summaries
    report = {
        "split": split,
        "first": first.to_dict(),
        "second": second.to_dict(),
        "delta": {key: getattr(second, key) - getattr(first, key) for key in ("N", "L", "M", "S", "R")},
    }
    write_outputs(config.out_dir, {"delta.json": json.dumps(report, indent=2) + "\n"})
    return report


def cmd_roles(config: AnalysisConfig):
    m = load_positions(config)
    roles = classify_roles(m)
    write_outputs(config.out_dir, {"roles.csv": format_roles(roles)})
    return roles, rank_by_magnitude(roles, config.top_k)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, type=Path, help="panel CSV (entity,period,claims,liabilities)")
    common.add_argument("--out-dir", type=Path, default=Path("."), help="output directory (default: .)")
    common.add_argument("--period", help="FROM:TO shorthand, e.g. 1983Q1:1997Q1")
    common.add_argument("--from", dest="period_from", help="first quarter (inclusive)")
    common.add_argument("--to", dest="period_to", help="last quarter (inclusive)")
    common.add_argument("--dendro-factor", type=float, default=DEFAULT_DENDRO_FACTOR,
                        help="dendrogram colouring factor T (default: 0.7)")
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="rolling window in quarters (default: 56)")
    common.add_argument("--top-k", type=int, default=3, help="largest creditors/debtors to highlight (default: 3)")
    common.add_argument("--format", dest="formats", action="append", choices=FORMATS,
                        help="output format to write; repeatable (default: all)")

    parser = argparse.ArgumentParser(
        prog="crossnet", description="Correlation-distance network analysis of quarterly position panels."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="distances, linkage, MST and topology for one period")
    sub.add_parser("rolling", parents=[common], help="residuality over a trailing window")
    cmp = sub.add_parser("compare", parents=[common], help="analyze two periods sharing a split quarter")
    cmp.add_argument("--split", required=True, help="quarter closing the first half and opening the second")
    sub.add_parser("roles", parents=[common], help="creditor/debtor roles from average positions")
    return parser


def _config_from_args(args) -> AnalysisConfig:
    period_from, period_to = args.period_from, args.period_to
    if args.period:
        start, sep, end = args.period.partition(":")
        if not sep:
            raise ValueError(f"--period expects FROM:TO, got {args.period!r}")
        period_from = period_from or start or None
        period_to = period_to or end or None
    return AnalysisConfig(
        input=args.input,
        out_dir=args.out_dir,
        period_from=period_from,
        period_to=period_to,
        dendro_factor=args.dendro_factor,
        window=args.window,
        top_k=args.top_k,
        formats=frozenset(args.formats or FORMATS),
    )


def _fail(stage: str, message: str) -> int:
    print(f"crossnet: error [{stage}]: {message}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        return _fail("config", str(exc))

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            if args.command == "analyze":
                s = cmd_analyze(config)
                print(f"{s.period_from}..{s.period_to}: N={s.N} L={s.L:.6f} M={s.M} S={s.S} R={s.R:.6f}")
            elif args.command == "rolling":
                series = cmd_rolling(config)
                print(f"{len(series.points)} windows of {series.window} quarters")
            elif args.command == "compare":
                report = cmd_compare(config, args.split)
                delta = report["delta"]
                print(f"delta L={delta['L']:+.6f} M={delta['M']:+d} S={delta['S']:+d} R={delta['R']:+.6f}")
            elif args.command == "roles":
                _, (creditors, debtors) = cmd_roles(config)
                print("top creditors: " + " ".join(a.entity for a in creditors))
                print("top debtors: " + " ".join(a.entity for a in debtors))
        except StageError as exc:
            return _fail(exc.stage, str(exc))
        except CrossnetError as exc:
            return _fail(exc.stage, str(exc))
        finally:
            seen = set()
            for w in caught:
                msg = str(w.message)
                if msg not in seen:
                    seen.add(msg)
                    print(f"crossnet: warning: {msg}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
