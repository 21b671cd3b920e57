"""Config ingestion, command dispatch, and CSV report emission.

A shift configuration is a single TOML document: a flat top level naming the
graph and the orbit families, plus one optional [defaults] table for run
parameters. Parsing is strict in both directions: unknown keys are rejected,
and every structural invariant (square adjacency, closed cycle words,
disjoint orbit families, positive tolerances) is checked eagerly, so a
ShiftConfig in hand is always runnable.

Reports are plain CSV with LF line endings and 12-significant-digit floats,
so two runs of the same command on the same config are byte-identical. Each
row carries a certification flag; the process exit status is zero exactly
when every row is certified (a certified divergence counts as an answer).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import math
import os
import sys
import tempfile
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - version fallback
    import tomli as tomllib  # type: ignore[no-redef]

from .entropy import entropy_counting, entropy_perron
from .errors import (
    OverlappingOrbitSets,
    ParseError,
    SmaleSpectraError,
    ValidationError,
)
from .groupoid_rep import (
    BasicFunction,
    StateVector,
    alpha,
    apply_all,
    convolve,
    unitary_shift,
)
from .sft_core import (
    BracketUndefined,
    EdgeShift,
    PeriodicOrbit,
    bracket,
    enumerate_heteroclinic,
    shift,
    stably_equivalent,
)
from .spectral_traces import (
    DiracKind,
    commutator_norm_bound,
    count_series,
    count_series_enumerated,
    dirac_apply,
    restricted_norm,
    ruelle_unitary,
    spectral_dimension,
    standard_localization,
    theta_trace,
    zeta_trace,
)
from .weights import WeightSystem, omega_s

COMMANDS = (
    "entropy", "counts", "trace-theta", "trace-zeta",
    "specdim", "check", "enumerate",
)

WordInput = Union[str, int]

_TOP_KEYS = frozenset((
    "name", "adjacency", "edges", "P", "Q",
    "omega0Kind", "rampSlope", "maxCore", "defaults",
))
_DEFAULT_KEYS = frozenset(("nMax", "tol", "window", "t", "s", "ceiling"))
_EDGE_KEYS = frozenset(("name", "source", "target"))
_OVERRIDE_KEYS = frozenset(("n_max", "tol", "window", "t", "s"))

# sampling window for the `check` invariant suite; fixed so the suite stays
# inside its runtime budget on every reference shift
_CHECK_CORE = 3


# --------------------------------------------------------------------------
# configuration types


def _positive(value: object, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{key} must be a positive number")
    out = float(value)
    if not out > 0 or math.isinf(out) or math.isnan(out):
        raise ValidationError(f"{key} must be a positive finite number")
    return out


@dataclass(frozen=True)
class RunDefaults:
    """Fallback run parameters; CLI flags override them field by field."""

    n_max: int = 30
    tol: float = 1e-8
    window: tuple[int, int] = (5, 30)
    t: float = 1.0
    s: float = 1.5
    ceiling: float = 1e6

    def __post_init__(self) -> None:
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, int):
            raise ValidationError("nMax must be an integer")
        if self.n_max < 1:
            raise ValidationError("nMax must be >= 1")
        object.__setattr__(self, "tol", _positive(self.tol, "tol"))
        object.__setattr__(self, "t", _positive(self.t, "t"))
        object.__setattr__(self, "s", _positive(self.s, "s"))
        object.__setattr__(self, "ceiling", _positive(self.ceiling, "ceiling"))
        window = tuple(self.window)
        if len(window) != 2 or any(
                isinstance(n, bool) or not isinstance(n, int) for n in window):
            raise ValidationError("window must be a pair of integers")
        if not 1 <= window[0] < window[1]:
            raise ValidationError("window must satisfy 1 <= lo < hi")
        object.__setattr__(self, "window", window)


@dataclass(frozen=True)
class ShiftConfig:
    """A parsed, fully validated run configuration.

    Cycle words are stored as edge-index tuples regardless of how the
    document spelled them; `serialize_config` writes them back as edge
    names, so a round trip through text preserves equality.
    """

    name: str
    adjacency: tuple[tuple[int, ...], ...]
    edges: Optional[tuple[tuple[str, str, str], ...]]
    attracting_words: tuple[tuple[int, ...], ...]
    repelling_words: tuple[tuple[int, ...], ...]
    omega0_kind: str = "indicator"
    ramp_slope: Fraction = Fraction(1)
    max_core: int = 5
    defaults: RunDefaults = field(default_factory=RunDefaults)

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("name must be a non-empty string")
        object.__setattr__(
            self, "adjacency",
            tuple(tuple(row) for row in self.adjacency))
        if self.edges is not None:
            object.__setattr__(
                self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(
            self, "attracting_words",
            tuple(tuple(wd) for wd in self.attracting_words))
        object.__setattr__(
            self, "repelling_words",
            tuple(tuple(wd) for wd in self.repelling_words))
        object.__setattr__(self, "ramp_slope", Fraction(self.ramp_slope))
        self._check_adjacency()
        if isinstance(self.max_core, bool) or not isinstance(self.max_core, int):
            raise ValidationError("maxCore must be an integer")
        if self.max_core < 1:
            raise ValidationError("maxCore must be >= 1")
        # building the weight system exercises every remaining invariant:
        # edge list consistency, closed primitive cycles, disjoint families
        self.weight_system()

    def _check_adjacency(self) -> None:
        matrix = self.adjacency
        if not matrix:
            raise ValidationError("adjacency must be non-empty")
        size = len(matrix)
        for row in matrix:
            if len(row) != size:
                raise ValidationError("adjacency must be square")
            for entry in row:
                if isinstance(entry, bool) or not isinstance(entry, int):
                    raise ValidationError("adjacency entries must be integers")
                if entry < 0:
                    raise ValidationError("adjacency entries must be >= 0")

    def system(self) -> EdgeShift:
        """The edge shift this config describes."""
        size = len(self.adjacency)
        vertices = tuple(str(i) for i in range(size))
        if self.edges is None:
            names: list[str] = []
            sources: list[int] = []
            targets: list[int] = []
            for i, row in enumerate(self.adjacency):
                for j, count in enumerate(row):
                    for _ in range(count):
                        names.append(str(len(names)))
                        sources.append(i)
                        targets.append(j)
            return EdgeShift(vertices, tuple(names),
                             tuple(sources), tuple(targets))
        index = {v: i for i, v in enumerate(vertices)}
        counts = [[0] * size for _ in range(size)]
        for name, source, target in self.edges:
            if not (isinstance(name, str) and isinstance(source, str)
                    and isinstance(target, str)):
                raise ValidationError("edge entries must be strings")
            if source not in index or target not in index:
                raise ValidationError(
                    f"edge {name!r} uses an unknown vertex")
            counts[index[source]][index[target]] += 1
        for i in range(size):
            for j in range(size):
                if counts[i][j] != self.adjacency[i][j]:
                    raise ValidationError(
                        "edges do not realize the adjacency matrix at "
                        f"({i}, {j})")
        return EdgeShift.from_edges(vertices, self.edges)

    def weight_system(self) -> WeightSystem:
        """Orbit families and bump profile over the configured shift."""
        system = self.system()
        attracting = tuple(
            PeriodicOrbit(system, wd) for wd in self.attracting_words)
        repelling = tuple(
            PeriodicOrbit(system, wd) for wd in self.repelling_words)
        if set(attracting) & set(repelling):
            raise OverlappingOrbitSets("P and Q overlap")
        return WeightSystem(system, attracting, repelling,
                            kind=self.omega0_kind,
                            ramp_slope=self.ramp_slope)


@dataclass(frozen=True)
class RunReport:
    """One command's tabular output plus per-row certification flags."""

    command: str
    inputs_digest: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    certifications: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(
            self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(
            self, "certifications", tuple(self.certifications))
        if len(self.certifications) != len(self.rows):
            raise ValidationError(
                "one certification flag per row is required")
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValidationError("row width differs from header")

    @property
    def all_certified(self) -> bool:
        return all(self.certifications)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buffer.getvalue()


# --------------------------------------------------------------------------
# parsing and serialization


def _reject_unknown(found: Mapping[str, object], allowed: frozenset,
                    where: str) -> None:
    unknown = sorted(set(found) - allowed)
    if unknown:
        raise ValidationError(
            f"unknown {where} key {unknown[0]!r}")


def _word_list(raw: object, key: str) -> tuple[tuple[WordInput, ...], ...]:
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{key} must be a non-empty list of cycles")
    out = []
    for cycle in raw:
        if not isinstance(cycle, list) or not cycle:
            raise ValidationError(
                f"{key} cycles must be non-empty edge words")
        for label in cycle:
            if isinstance(label, bool) or not isinstance(label, (str, int)):
                raise ValidationError(
                    f"{key} entries must be edge names or indices")
        out.append(tuple(cycle))
    return tuple(out)


def _resolve_words(words: Sequence[tuple[WordInput, ...]],
                   edge_names: Sequence[str],
                   key: str) -> tuple[tuple[int, ...], ...]:
    index = {name: i for i, name in enumerate(edge_names)}
    resolved = []
    for cycle in words:
        word = []
        for label in cycle:
            if isinstance(label, str):
                if label not in index:
                    raise ValidationError(
                        f"{key} uses unknown edge label {label!r}")
                word.append(index[label])
            else:
                if not 0 <= label < len(edge_names):
                    raise ValidationError(
                        f"{key} edge index {label} out of range")
                word.append(label)
        resolved.append(tuple(word))
    return tuple(resolved)


def parse_config(text: str) -> ShiftConfig:
    """Parse and fully validate a configuration document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        # the decoder's message carries the line and column
        raise ParseError(f"invalid config document: {exc}") from exc
    _reject_unknown(doc, _TOP_KEYS, "config")
    for key in ("name", "adjacency", "P", "Q"):
        if key not in doc:
            raise ValidationError(f"config key {key!r} is required")

    adjacency = doc["adjacency"]
    if not isinstance(adjacency, list) or not all(
            isinstance(row, list) for row in adjacency):
        raise ValidationError("adjacency must be a matrix")

    edges = None
    if "edges" in doc:
        raw_edges = doc["edges"]
        if not isinstance(raw_edges, list):
            raise ValidationError("edges must be a list of tables")
        rows = []
        for entry in raw_edges:
            if not isinstance(entry, dict):
                raise ValidationError("edges must be a list of tables")
            _reject_unknown(entry, _EDGE_KEYS, "edge")
            for k in ("name", "source", "target"):
                if k not in entry or not isinstance(entry[k], str):
                    raise ValidationError(
                        f"edge field {k!r} must be a string")
            rows.append((entry["name"], entry["source"], entry["target"]))
        edges = tuple(rows)

    # resolve edge labels against the same naming the builder will use
    if edges is not None:
        edge_names = tuple(e[0] for e in edges)
    else:
        edge_names = tuple(
            str(i) for i in range(sum(
                entry for row in adjacency for entry in row
                if isinstance(entry, int) and not isinstance(entry, bool)
                and entry > 0)))
    attracting = _resolve_words(_word_list(doc["P"], "P"), edge_names, "P")
    repelling = _resolve_words(_word_list(doc["Q"], "Q"), edge_names, "Q")

    defaults = RunDefaults()
    if "defaults" in doc:
        table = doc["defaults"]
        if not isinstance(table, dict):
            raise ValidationError("defaults must be a table")
        _reject_unknown(table, _DEFAULT_KEYS, "defaults")
        fields: dict[str, object] = {}
        if "nMax" in table:
            fields["n_max"] = table["nMax"]
        if "tol" in table:
            fields["tol"] = table["tol"]
        if "t" in table:
            fields["t"] = table["t"]
        if "s" in table:
            fields["s"] = table["s"]
        if "ceiling" in table:
            fields["ceiling"] = table["ceiling"]
        if "window" in table:
            fields["window"] = parse_window(table["window"])
        defaults = replace(defaults, **fields)

    kind = doc.get("omega0Kind", "indicator")
    slope = doc.get("rampSlope", 1)
    if isinstance(slope, bool) or not isinstance(slope, (int, float)):
        raise ValidationError("rampSlope must be a number")
    return ShiftConfig(
        name=doc["name"],
        adjacency=tuple(tuple(row) for row in adjacency),
        edges=edges,
        attracting_words=attracting,
        repelling_words=repelling,
        omega0_kind=kind,
        ramp_slope=Fraction(slope),
        max_core=doc.get("maxCore", 5),
        defaults=defaults,
    )


def parse_window(raw: object) -> tuple[int, int]:
    """Parse a shell window written as "lo:hi"."""
    if not isinstance(raw, str):
        raise ValidationError("window must be a string like \"5:30\"")
    lo, sep, hi = raw.partition(":")
    if not sep:
        raise ValidationError(f"window {raw!r} is not of the form lo:hi")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise ValidationError(
            f"window {raw!r} must hold two integers") from None


def _toml_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_config(cfg: ShiftConfig) -> str:
    """Canonical document for cfg; parses back to an equal config."""
    system = cfg.system()
    lines = [f"name = {_toml_string(cfg.name)}"]
    matrix = ", ".join(
        "[" + ", ".join(str(n) for n in row) + "]" for row in cfg.adjacency)
    lines.append(f"adjacency = [{matrix}]")
    if cfg.edges is not None:
        rows = ", ".join(
            "{ name = %s, source = %s, target = %s }" % (
                _toml_string(n), _toml_string(s), _toml_string(t))
            for n, s, t in cfg.edges)
        lines.append(f"edges = [{rows}]")

    def words(cycles: Sequence[tuple[int, ...]]) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(
                _toml_string(system.edge_names[e]) for e in wd) + "]"
            for wd in cycles) + "]"

    lines.append(f"P = {words(cfg.attracting_words)}")
    lines.append(f"Q = {words(cfg.repelling_words)}")
    lines.append(f"omega0Kind = {_toml_string(cfg.omega0_kind)}")
    lines.append(f"rampSlope = {float(cfg.ramp_slope)!r}")
    lines.append(f"maxCore = {cfg.max_core}")
    d = cfg.defaults
    lines.append("")
    lines.append("[defaults]")
    lines.append(f"nMax = {d.n_max}")
    lines.append(f"tol = {d.tol!r}")
    lines.append(f"window = {_toml_string(f'{d.window[0]}:{d.window[1]}')}")
    lines.append(f"t = {d.t!r}")
    lines.append(f"s = {d.s!r}")
    lines.append(f"ceiling = {d.ceiling!r}")
    return "\n".join(lines) + "\n"


def config_digest(cfg: ShiftConfig) -> str:
    """Stable content hash of the resolved configuration."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# report assembly


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def _word_label(system: EdgeShift, word: Sequence[int]) -> str:
    return ".".join(system.edge_names[e] for e in word)


def _resolve_overrides(defaults: RunDefaults,
                       overrides: Optional[Mapping[str, object]]
                       ) -> RunDefaults:
    if not overrides:
        return defaults
    _reject_unknown(overrides, _OVERRIDE_KEYS, "override")
    return replace(defaults, **dict(overrides))


def _trace_report(command: str, digest: str, result) -> RunReport:
    row = (_fmt(result.terms_used), _fmt(result.value),
           _fmt(result.tail_bound), _fmt(result.converged))
    certified = result.converged or result.diverged
    return RunReport(command, digest,
                     ("termsUsed", "value", "tailBound", "converged"),
                     (row,), (certified,))


def _run_counts(cfg: ShiftConfig, opts: RunDefaults,
                digest: str) -> RunReport:
    weights = cfg.weight_system()
    series = count_series(weights, standard_localization(weights),
                          opts.n_max)
    rows = []
    flags = []
    for n in range(1, opts.n_max + 1):
        certified = series.certified_at(n)
        rows.append((_fmt(n), _fmt(series.count(n)), _fmt(certified)))
        flags.append(certified)
    return RunReport("counts", digest, ("n", "c_n", "certified"),
                     tuple(rows), tuple(flags))


def _run_specdim(cfg: ShiftConfig, opts: RunDefaults,
                 digest: str) -> RunReport:
    weights = cfg.weight_system()
    estimate, stderr = spectral_dimension(
        weights, standard_localization(weights), opts.window)
    perron = entropy_perron(cfg.adjacency)
    target = perron.value / math.log(float(weights.system.expansion))
    row = (_fmt(opts.window[0]), _fmt(opts.window[1]), _fmt(estimate),
           _fmt(stderr), _fmt(perron.value), _fmt(target))
    header = ("nMin", "nMax", "dimEstimate", "stdError",
              "entropyPerron", "target")
    return RunReport("specdim", digest, header, (row,), (True,))


def _run_entropy(cfg: ShiftConfig, opts: RunDefaults,
                 digest: str) -> RunReport:
    weights = cfg.weight_system()
    counting = entropy_counting(
        weights, standard_localization(weights), opts.n_max)
    perron = entropy_perron(cfg.adjacency)
    difference = abs(counting.value - perron.value)
    certified = difference <= counting.error_bound + perron.error_bound
    header = ("nMax", "countingValue", "countingError",
              "perronValue", "perronError", "difference")
    row = (_fmt(opts.n_max), _fmt(counting.value),
           _fmt(counting.error_bound), _fmt(perron.value),
           _fmt(perron.error_bound), _fmt(difference))
    return RunReport("entropy", digest, header, (row,), (certified,))


def _run_enumerate(cfg: ShiftConfig, digest: str) -> RunReport:
    weights = cfg.weight_system()
    system = weights.system
    points = enumerate_heteroclinic(
        system, weights.attracting, weights.repelling, cfg.max_core)
    header = ("index", "leftWord", "leftPhase", "coreStart", "core",
              "rightWord", "rightPhase", "omegaS")
    rows = []
    for i, point in enumerate(points):
        rows.append((
            _fmt(i),
            _word_label(system, point.left.word), _fmt(point.left_phase),
            _fmt(point.core_start), _word_label(system, point.core),
            _word_label(system, point.right.word), _fmt(point.right_phase),
            _fmt(omega_s(weights, point)),
        ))
    flags = (True,) * len(rows)
    return RunReport("enumerate", digest, header, tuple(rows), flags)


# --------------------------------------------------------------------------
# the `check` invariant suite


def _check_bracket(points) -> bool:
    sample = points[:40]
    for x in sample:
        if bracket(x, x) != x:
            return False
    for x in sample:
        for y in sample:
            try:
                xy = bracket(x, y)
            except BracketUndefined:
                continue
            for z in sample[:10]:
                try:
                    if bracket(xy, z) != bracket(x, z):
                        return False
                except BracketUndefined:
                    continue
            try:
                if shift(xy, 1) != bracket(shift(x, 1), shift(y, 1)):
                    return False
            except BracketUndefined:
                continue
    return True


def _check_cocycle(weights, points) -> bool:
    return all(
        omega_s(weights, shift(x, 1)) == omega_s(weights, x) - 1
        for x in points)


def _check_covariance(weights, func, points) -> bool:
    shifted = alpha(func, -1)
    for x in points:
        xi = StateVector.basis(x)
        lhs = ruelle_unitary(func.apply(unitary_shift(xi, 1)))
        if lhs != shifted.apply(xi):
            return False
    return True


def _check_multiplicative(weights, funcs, points) -> bool:
    for f in funcs:
        for g in funcs:
            product = convolve(f, g)
            for x in points:
                xi = StateVector.basis(x)
                if apply_all(product, xi) != f.apply(g.apply(xi)):
                    return False
    return True


def _splice_pair(points):
    for x in points:
        for y in points:
            if x != y and stably_equivalent(x, y):
                return x, y
    return None


def _run_check(cfg: ShiftConfig, opts: RunDefaults,
               digest: str) -> RunReport:
    weights = cfg.weight_system()
    system = weights.system
    core = min(cfg.max_core, _CHECK_CORE)
    points = enumerate_heteroclinic(
        system, weights.attracting, weights.repelling, core)
    ball = standard_localization(weights)
    funcs = [ball, alpha(ball, -1)]
    pair = _splice_pair(points)
    if pair is not None:
        funcs.append(BasicFunction.splice(pair[0], pair[1]))

    outcomes: list[tuple[str, bool]] = []

    def record(name: str, prop) -> None:
        try:
            outcomes.append((name, bool(prop())))
        except SmaleSpectraError:
            outcomes.append((name, False))

    record("bracket-axioms", lambda: _check_bracket(points))
    record("cocycle-identity", lambda: _check_cocycle(weights, points))
    record("covariance",
           lambda: _check_covariance(weights, ball, points))
    record("convolution-multiplicative",
           lambda: _check_multiplicative(weights, funcs, points))
    record("shift-commutator-is-unitary",
           lambda: _linear_commutator_identity(weights, points))
    for kind, label in ((DiracKind.linear(), "linear"),
                        (DiracKind.exponential(system.expansion),
                         "exponential")):
        record(f"commutator-bound-{label}", lambda k=kind: _bound_holds(
            k, weights, ball, core))
    record("counts-match-enumeration",
           lambda: _counts_match(weights, ball))
    record("entropy-cross-validation",
           lambda: _entropy_agrees(cfg, weights, ball, opts))
    record("theta-certified",
           lambda: theta_trace(weights, ball, opts.t, 1e-9).converged)
    record("restricted-norm-decay",
           lambda: _restricted_norm_decays(weights, ball))

    rows = tuple((name, _fmt(ok)) for name, ok in outcomes)
    flags = tuple(ok for _, ok in outcomes)
    return RunReport("check", digest, ("property", "passed"), rows, flags)


def _linear_commutator_identity(weights, points) -> bool:
    kind = DiracKind.linear()
    for x in points:
        xi = StateVector.basis(x)
        lhs = dirac_apply(kind, weights, ruelle_unitary(xi)) \
            - ruelle_unitary(dirac_apply(kind, weights, xi))
        if lhs != ruelle_unitary(xi):
            return False
    return True


def _bound_holds(kind, weights, ball, core) -> bool:
    empirical, analytic = commutator_norm_bound(kind, weights, ball, core)
    return empirical <= analytic


def _counts_match(weights, ball) -> bool:
    fast = count_series(weights, ball, 8)
    slow = count_series_enumerated(weights, ball, 8)
    return fast.shells == slow.shells


def _entropy_agrees(cfg, weights, ball, opts) -> bool:
    n_max = max(opts.n_max, 10)
    counting = entropy_counting(weights, ball, n_max)
    perron = entropy_perron(cfg.adjacency)
    return (abs(counting.value - perron.value)
            <= counting.error_bound + perron.error_bound)


def _restricted_norm_decays(weights, ball) -> bool:
    peak = max(abs(c.amplitude)
               for s in count_series(weights, ball, 10).shells
               for c in s.classes)
    return all(
        restricted_norm(weights, ball, n) <= peak / (1 + n * n) + 1e-15
        for n in range(1, 11))


# --------------------------------------------------------------------------
# dispatch and entry point


def run(command: str, cfg: ShiftConfig,
        overrides: Optional[Mapping[str, object]] = None) -> RunReport:
    """Execute one command against a validated config."""
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    opts = _resolve_overrides(cfg.defaults, overrides)
    digest = config_digest(cfg)
    weights = cfg.weight_system()
    if command == "counts":
        return _run_counts(cfg, opts, digest)
    if command == "trace-theta":
        result = theta_trace(weights, standard_localization(weights),
                             opts.t, opts.tol)
        return _trace_report("trace-theta", digest, result)
    if command == "trace-zeta":
        result = zeta_trace(weights, standard_localization(weights),
                            opts.s, opts.tol, ceiling=opts.ceiling)
        return _trace_report("trace-zeta", digest, result)
    if command == "specdim":
        return _run_specdim(cfg, opts, digest)
    if command == "entropy":
        return _run_entropy(cfg, opts, digest)
    if command == "enumerate":
        return _run_enumerate(cfg, digest)
    return _run_check(cfg, opts, digest)


def write_atomic(path: Union[str, Path], payload: str) -> None:
    """Write the full payload then swap it into place."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=str(target.parent) or ".", prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smale-spectra",
        description="Certified traces, counts, and entropy for edge shifts.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True,
                        help="path to a TOML shift configuration")
    parser.add_argument("--n-max", type=int, default=None,
                        help="shell truncation for counts and entropy")
    parser.add_argument("--t", type=float, default=None,
                        help="heat parameter for trace-theta")
    parser.add_argument("--s", type=float, default=None,
                        help="exponent for trace-zeta")
    parser.add_argument("--tol", type=float, default=None,
                        help="certified tail tolerance")
    parser.add_argument("--window", default=None,
                        help="shell window lo:hi for specdim")
    parser.add_argument("--out", default=None,
                        help="write the CSV report here instead of stdout")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict[str, object] = {}
    try:
        if args.n_max is not None:
            overrides["n_max"] = args.n_max
        if args.t is not None:
            overrides["t"] = args.t
        if args.s is not None:
            overrides["s"] = args.s
        if args.tol is not None:
            overrides["tol"] = args.tol
        if args.window is not None:
            overrides["window"] = parse_window(args.window)
        text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(text)
        report = run(args.command, cfg, overrides)
    except (SmaleSpectraError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = report.to_csv()
    if args.out is not None:
        write_atomic(args.out, payload)
    else:
        sys.stdout.write(payload)
    return 0 if report.all_certified else 1


if __name__ == "__main__":
    sys.exit(main())
