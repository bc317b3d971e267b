"""Stage runners shared by the command-line interface.

Each stage reads its inputs (primary files or artifacts written by earlier
stages), writes its artifacts into the output directory and returns a
one-line summary. The ``pipeline`` runner chains the stages in order, so
its outputs are byte-identical to running the stages one by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from . import dedup as dd
from . import environment as env
from . import export as ex
from . import factor as fa
from . import layout as la
from . import network as nw
from .errors import CitenvError, MissingStageError
from .ingest import (
    normalize_journal_name,
    parse_link_table,
    parse_metadata,
    parse_reference_records,
)

FILE_TABLE2 = "table2.csv"
FILE_ENVIRONMENT = "environment.csv"
FILE_MATRIX = "matrix.csv"
FILE_SHARES = "shares.csv"
FILE_TABLE3 = "table3.csv"
FILE_EDGES = "edges.csv"
FILE_NODES = "nodes.csv"
FILE_POSITIONS = "positions.csv"
FILE_SVG = "figure.svg"
FILE_PAJEK = "graph.net"

_DEFAULT_INTL = "ANGEW CHEM INT EDIT"
_DEFAULT_GERMAN = "ANGEW CHEM"


@dataclass
class PipelineConfig:
    """All knobs of the pipeline; every field maps to a config key and a
    command-line flag of the same name (flags win)."""

    links: Path | None = None
    refs: Path | None = None
    meta: Path | None = None
    out_dir: Path = Path("out")
    seed_journal: str = _DEFAULT_INTL
    total_cites: int = 0
    self_cites: int = 0
    intl_name: str = _DEFAULT_INTL
    german_name: str = _DEFAULT_GERMAN
    use_corrected: bool = True
    include_diagonal: bool = True
    cosine_cutoff: float = 0.2
    loading_cutoff: float = 0.4
    kaiser_normalize: bool = True
    edge_length: float = 1.0
    spring_constant: float = 1.0
    layout_eps: float = 1e-4
    layout_max_outer: int = 5000
    layout_seed: int = 0
    distance_mode: str = "hops"

    def validate(self) -> None:
        if not 0.0 <= self.cosine_cutoff < 1.0:
            raise CitenvError(f"cosine_cutoff must lie in [0, 1), got {self.cosine_cutoff}")
        if not 0.0 < self.loading_cutoff < 1.0:
            raise CitenvError(f"loading_cutoff must lie in (0, 1), got {self.loading_cutoff}")
        if self.distance_mode not in la.DISTANCE_MODES:
            raise CitenvError(f"distance_mode must be one of {la.DISTANCE_MODES}")
        if self.edge_length <= 0 or self.spring_constant <= 0 or self.layout_eps <= 0:
            raise CitenvError("layout parameters must be positive")
        if not str(self.out_dir):
            raise CitenvError("out_dir must not be empty")


_BOOL_VALUES = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def load_config(path: Path | str) -> dict[str, str]:
    """Read a flat key/value config file.

    One ``key = value`` pair per line; ``#`` starts a comment; values may
    be quoted. Unknown keys are rejected here so typos fail loudly.
    """
    known = {f.name for f in fields(PipelineConfig)}
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CitenvError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise CitenvError(f"config line {lineno}: unknown key {key!r}")
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        values[key] = value
    return values


def config_from(file_values: dict[str, str], overrides: dict[str, object]) -> PipelineConfig:
    """Merge defaults, config-file values and explicit flag overrides."""
    cfg = PipelineConfig()
    for f in fields(PipelineConfig):
        if f.name in file_values:
            setattr(cfg, f.name, _coerce(f.name, file_values[f.name], getattr(cfg, f.name)))
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    for name in ("seed_journal", "intl_name", "german_name"):
        setattr(cfg, name, normalize_journal_name(getattr(cfg, name)))
    for name in ("links", "refs", "meta", "out_dir"):
        value = getattr(cfg, name)
        if value is not None:
            setattr(cfg, name, Path(value))
    cfg.validate()
    return cfg


def _coerce(name: str, raw: str, default: object) -> object:
    if isinstance(default, bool):
        try:
            return _BOOL_VALUES[raw.lower()]
        except KeyError:
            raise CitenvError(f"config key {name}: expected a boolean, got {raw!r}") from None
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def _write(cfg: PipelineConfig, name: str, text: str) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / name).write_text(text, encoding="utf-8", newline="")


def _require_input(cfg: PipelineConfig, name: str) -> Path:
    path = getattr(cfg, name)
    if path is None:
        raise CitenvError(f"this stage needs --{name}")
    return path


def _read_artifact(cfg: PipelineConfig, name: str, stage: str) -> str:
    path = cfg.out_dir / name
    if not path.exists():
        raise MissingStageError(stage)
    return path.read_text(encoding="utf-8")


def _edition_counts(cfg: PipelineConfig):
    records = parse_reference_records(_require_input(cfg, "refs").read_text(encoding="utf-8"))
    pairs = dd.detect_double_citations(records, cfg.intl_name, cfg.german_name)
    counts = dd.corrected_counts(records, pairs, cfg.intl_name, cfg.german_name)
    return records, pairs, counts


def stage_dedup(cfg: PipelineConfig) -> str:
    _, pairs, counts = _edition_counts(cfg)
    _write(cfg, FILE_TABLE2, dd.edition_report_csv(counts))
    total = sum(c.sum_with_doubles for c in counts)
    corrected = sum(c.corrected for c in counts)
    pct = dd.overrepresentation_pct(len(pairs), total) if pairs else 0.0
    return f"doubles={len(pairs)} corrected={corrected} overrepresentation_pct={pct:.1f}"


def stage_env(cfg: PipelineConfig) -> str:
    links = parse_link_table(_require_input(cfg, "links").read_text(encoding="utf-8"))
    threshold = env.citation_threshold(cfg.total_cites, cfg.self_cites)
    selected = env.select_environment(links, cfg.seed_journal, threshold)
    to_seed: dict[str, int] = {}
    for link in links:
        if link.cited == cfg.seed_journal:
            to_seed[link.citing] = to_seed.get(link.citing, 0) + link.count
    _write(cfg, FILE_ENVIRONMENT, env.environment_csv(selected, to_seed))
    return f"threshold={threshold} selected={len(selected)}"


def stage_matrix(cfg: PipelineConfig) -> str:
    links = parse_link_table(_require_input(cfg, "links").read_text(encoding="utf-8"))
    selected = [j for j, _ in env.parse_environment_csv(_read_artifact(cfg, FILE_ENVIRONMENT, "environment"))]
    if cfg.use_corrected and cfg.refs is not None:
        _, _, counts = _edition_counts(cfg)
        links = dd.apply_correction(links, counts, cfg.intl_name, cfg.german_name)
        # the environment was selected on the seed's raw name; the corrected
        # table keeps the international edition as the merged column
    matrix = env.build_matrix(links, selected)
    shares = env.impact_shares(matrix)
    _write(cfg, FILE_MATRIX, env.matrix_csv(matrix))
    _write(cfg, FILE_SHARES, env.shares_csv(shares))
    return f"journals={matrix.n} total={matrix.grand_total()}"


def stage_factors(cfg: PipelineConfig) -> str:
    matrix = env.parse_matrix_csv(_read_artifact(cfg, FILE_MATRIX, "matrix"))
    corr = fa.correlation_matrix(matrix, include_diagonal=cfg.include_diagonal)
    solution = fa.principal_components(corr)
    if solution.n_factors > 1:
        solution = fa.varimax(solution, kaiser_normalize=cfg.kaiser_normalize)
    assignments = fa.assign_factors(solution, cutoff=cfg.loading_cutoff)
    _write(cfg, FILE_TABLE3, fa.loadings_csv(solution, assignments))
    return (
        f"components={solution.n_factors} "
        f"explained={solution.explained_total:.2f} converged={solution.converged}"
    )


def stage_graph(cfg: PipelineConfig) -> str:
    matrix = env.parse_matrix_csv(_read_artifact(cfg, FILE_MATRIX, "matrix"))
    shares = env.parse_shares_csv(_read_artifact(cfg, FILE_SHARES, "matrix"))
    groups: dict[str, str] = {}
    if cfg.meta is not None:
        metas = parse_metadata(cfg.meta.read_text(encoding="utf-8"))
        groups = {
            j: group
            for j, m in metas.items()
            if (group := ex.category_group(m)) is not None
        }
    cosine = nw.cosine_matrix(matrix, include_diagonal=cfg.include_diagonal)
    graph = nw.build_graph(cosine, shares, cutoff=cfg.cosine_cutoff, groups=groups)
    _write(cfg, FILE_EDGES, nw.edges_csv(graph))
    _write(cfg, FILE_NODES, nw.nodes_csv(graph))
    return f"nodes={graph.n} edges={len(graph.edges)}"


def _layout_params(cfg: PipelineConfig) -> la.LayoutParams:
    return la.LayoutParams(
        edge_length=cfg.edge_length,
        spring_constant=cfg.spring_constant,
        eps=cfg.layout_eps,
        max_outer=cfg.layout_max_outer,
        seed=cfg.layout_seed,
    )


def stage_layout(cfg: PipelineConfig) -> str:
    graph = nw.parse_graph_csv(
        _read_artifact(cfg, FILE_NODES, "network"), _read_artifact(cfg, FILE_EDGES, "network")
    )
    distances = la.graph_distances(graph, mode=cfg.distance_mode)
    result = la.kamada_kawai(distances, _layout_params(cfg), [n.journal for n in graph.nodes])
    _write(cfg, FILE_POSITIONS, la.positions_csv(result))
    return (
        f"converged={result.converged} iterations={result.iterations} "
        f"energy={result.final_energy:.6g}"
    )


def stage_render(cfg: PipelineConfig) -> str:
    graph = nw.parse_graph_csv(
        _read_artifact(cfg, FILE_NODES, "network"), _read_artifact(cfg, FILE_EDGES, "network")
    )
    layout_result = la.parse_positions_csv(_read_artifact(cfg, FILE_POSITIONS, "layout"))
    _write(cfg, FILE_PAJEK, ex.write_pajek(graph, layout_result))
    glyphs = ex.make_glyphs(graph, layout_result)
    _write(cfg, FILE_SVG, ex.render_svg(glyphs, graph.edges, cutoff=cfg.cosine_cutoff))
    return f"svg={FILE_SVG} pajek={FILE_PAJEK}"


def stage_report(cfg: PipelineConfig) -> str:
    """Recompute every stage in memory and emit the full report bundle."""
    outputs = ex.PipelineOutputs()
    if cfg.refs is not None:
        _, _, counts = _edition_counts(cfg)
        outputs.edition_counts = counts
    if cfg.links is not None:
        links = parse_link_table(cfg.links.read_text(encoding="utf-8"))
        threshold = env.citation_threshold(cfg.total_cites, cfg.self_cites)
        selected = env.select_environment(links, cfg.seed_journal, threshold)
        if cfg.use_corrected and outputs.edition_counts is not None:
            links = dd.apply_correction(links, outputs.edition_counts, cfg.intl_name, cfg.german_name)
        outputs.matrix = env.build_matrix(links, selected)
        outputs.shares = env.impact_shares(outputs.matrix)
        corr = fa.correlation_matrix(outputs.matrix, include_diagonal=cfg.include_diagonal)
        solution = fa.principal_components(corr)
        if solution.n_factors > 1:
            solution = fa.varimax(solution, kaiser_normalize=cfg.kaiser_normalize)
        outputs.solution = solution
        outputs.assignments = fa.assign_factors(solution, cutoff=cfg.loading_cutoff)
        groups: dict[str, str] = {}
        if cfg.meta is not None:
            metas = parse_metadata(cfg.meta.read_text(encoding="utf-8"))
            groups = {
                j: group
                for j, m in metas.items()
                if (group := ex.category_group(m)) is not None
            }
        cosine = nw.cosine_matrix(outputs.matrix, include_diagonal=cfg.include_diagonal)
        outputs.graph = nw.build_graph(cosine, outputs.shares, cutoff=cfg.cosine_cutoff, groups=groups)
        distances = la.graph_distances(outputs.graph, mode=cfg.distance_mode)
        outputs.layout = la.kamada_kawai(
            distances, _layout_params(cfg), [n.journal for n in outputs.graph.nodes]
        )
    written = ex.write_reports(outputs, cfg.out_dir)
    return f"reports={len(written)} dir={cfg.out_dir}"


PIPELINE_STAGES = ("dedup", "env", "matrix", "factors", "graph", "layout", "render")

STAGE_RUNNERS = {
    "dedup": stage_dedup,
    "env": stage_env,
    "matrix": stage_matrix,
    "factors": stage_factors,
    "graph": stage_graph,
    "layout": stage_layout,
    "render": stage_render,
    "report": stage_report,
}


def run_pipeline(cfg: PipelineConfig) -> list[str]:
    """All stages in order; dedup is skipped when no reference records are
    configured."""
    summaries = []
    for stage in PIPELINE_STAGES:
        if stage == "dedup" and cfg.refs is None:
            continue
        summaries.append(STAGE_RUNNERS[stage](cfg))
    return summaries
