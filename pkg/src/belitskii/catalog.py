"""The table of indecomposable canonical systems with |d| <= 4.

Templates hold matrices over the symbols ``0``, ``1``, the parameters
``λ``, ``μ``, ``ν`` and the marker ``∅`` for an entry cleared by
regularization (it instantiates to 0).  Parameters listed as eigenvalue
parameters must take pairwise distinct values; the remaining ones are free.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .analysis import decompose, is_indecomposable_by_links, is_indecomposable_by_local_ring
from .errors import NotIndecomposable, ParamsNotDistinct, UnboundParam, Unsupported
from .linalg import ZERO, Matrix, Scalar, as_scalar, format_scalar
from .reduction import CanonicalSystem, SystemTriple, apply_group, canonicalize
from .sampling import DEFAULT_POOL, random_group_element, random_system

ZERO_MARKER = "∅"
PARAMS = ("λ", "μ", "ν")
_ALIASES = {"lambda": "λ", "mu": "μ", "nu": "ν"}

# the two instantiations every template must survive
PARAMETER_SETS = (
    {"λ": 0, "μ": 1, "ν": 2},
    {"λ": -1, "μ": "1/2", "ν": "3+i"},
)
MAX_TOTAL_DIM = 4


@dataclass(frozen=True)
class Template:
    id: str
    d: tuple[int, int, int]
    A: tuple[tuple[str, ...], ...]
    B: tuple[tuple[str, ...], ...]
    C: tuple[tuple[str, ...], ...]
    eigen_params: tuple[str, ...]
    free_params: tuple[str, ...] = ()

    @property
    def params(self) -> tuple[str, ...]:
        return self.eigen_params + self.free_params

    @property
    def total_dim(self) -> int:
        return sum(self.d)

    def describe(self) -> str:
        parts = []
        for name in ("A", "B", "C"):
            M = getattr(self, name)
            if M and M[0]:
                parts.append(f"{name}=[" + "; ".join(" ".join(r) for r in M) + "]")
        return ", ".join(parts)

    def to_dict(self) -> dict:
        m, n, l = self.d
        return {"id": self.id, "m": m, "n": n, "l": l,
                "A": [list(r) for r in self.A], "B": [list(r) for r in self.B],
                "C": [list(r) for r in self.C],
                "eigen_params": list(self.eigen_params), "free_params": list(self.free_params)}


def _grid(rows, n_rows: int) -> tuple[tuple[str, ...], ...]:
    if not rows and n_rows:
        return tuple(() for _ in range(n_rows))
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=1)
def _load() -> tuple[Template, ...]:
    raw = json.loads(resources.files("belitskii").joinpath("data/templates.json").read_text(encoding="utf-8"))
    out = []
    for e in raw["templates"]:
        out.append(Template(e["id"], (e["m"], e["n"], e["l"]), _grid(e["A"], e["n"]), _grid(e["B"], e["n"]),
                            _grid(e["C"], e["l"]), tuple(e["eigen_params"]), tuple(e["free_params"])))
    return tuple(out)


def templates(max_total_dim: int = MAX_TOTAL_DIM) -> list[Template]:
    if max_total_dim > MAX_TOTAL_DIM:
        raise Unsupported(f"the table stops at |d| = {MAX_TOTAL_DIM}")
    return [t for t in _load() if t.total_dim <= max_total_dim]


def get_template(tid: str) -> Template:
    for t in _load():
        if t.id == tid:
            return t
    raise KeyError(tid)


def _normalize_params(params) -> dict[str, Scalar]:
    return {_ALIASES.get(k, k): as_scalar(v) for k, v in params.items()}


def instantiate(t: Template, params) -> SystemTriple:
    """Substitute parameter values; extra keys in ``params`` are ignored."""
    vals = _normalize_params(params)
    for p in t.params:
        if p not in vals:
            raise UnboundParam(f"template {t.id} needs a value for {p}")
    eig = [vals[p] for p in t.eigen_params]
    if len(set(eig)) != len(eig):
        raise ParamsNotDistinct(f"template {t.id}: values for {', '.join(t.eigen_params)} must be pairwise distinct")

    def cell(x: str) -> Scalar:
        if x == ZERO_MARKER:
            return ZERO
        if x in vals and x in t.params:
            return vals[x]
        return as_scalar(x)

    m, n, l = t.d

    def mat(grid, rows, cols):
        return Matrix(rows, cols, [cell(x) for r in grid for x in r])

    return SystemTriple(m, n, l, mat(t.A, n, n), mat(t.B, n, m), mat(t.C, l, n))


# ---------------------------------------------------------------------------
# matching
# ---------------------------------------------------------------------------

_PROBE_EIGEN = (10, 20, 30)
_PROBE_FREE = (1000, 2000)


@lru_cache(maxsize=None)
def _patterns(t: Template) -> tuple[tuple, ...]:
    """Canonical shapes of ``t`` for every ordering of its eigenvalue parameters.

    The engine orders eigenvalues, so an instantiation is only a fixed point
    for one ordering; the others canonicalize to a permuted shape.  Each shape
    is recorded as a flat tuple of constants and parameter names.  A free
    parameter may come out transformed (ν -> 1/ν when two eigenvalues swap);
    such a shape is dropped when it equals a recorded one up to renaming.
    """
    out, seen = [], set()
    for perm in itertools.permutations(t.eigen_params):
        probe = {p: _PROBE_EIGEN[i] for i, p in enumerate(perm)}
        probe.update({p: _PROBE_FREE[i] for i, p in enumerate(t.free_params)})
        back = {as_scalar(v): p for p, v in probe.items()}
        c = canonicalize(instantiate(t, probe)).canonical
        pattern = []
        for x in _flat(c):
            if x in back:
                pattern.append(back[x])
            elif x in (0, 1):
                pattern.append(x)
            else:
                pattern.append("*")
        pattern = tuple(pattern)
        key = _shape_key(pattern, t.eigen_params)
        if key in seen:
            continue
        if "*" in pattern:
            raise AssertionError(f"template {t.id}: permuted shape {pattern} has a transformed parameter")
        seen.add(key)
        out.append(pattern)
    return tuple(out)


def _shape_key(pattern, eigen_params) -> tuple:
    names: dict[str, str] = {}
    key = []
    for p in pattern:
        if p in eigen_params:
            key.append(names.setdefault(p, f"e{len(names)}"))
        elif isinstance(p, str):
            key.append("f")
        else:
            key.append(p)
    return tuple(key)


def _flat(s: SystemTriple) -> list[Scalar]:
    return list(s.A.entries) + list(s.B.entries) + list(s.C.entries)


def _unify(pattern, values) -> dict[str, Scalar] | None:
    binding: dict[str, Scalar] = {}
    for p, v in zip(pattern, values):
        if isinstance(p, str):
            if binding.setdefault(p, v) != v:
                return None
        elif p != v:
            return None
    return binding


def _as_canonical(c) -> CanonicalSystem:
    return c if isinstance(c, CanonicalSystem) else canonicalize(c)


def match_all(c, ordered: bool = True) -> list[tuple[str, dict[str, Scalar]]]:
    """Every (template id, binding) that reproduces the canonical system ``c``.

    With ``ordered`` only the printed ordering of the eigenvalue parameters is
    tried (ascending in the engine's order); otherwise only the other orderings.
    """
    c = _as_canonical(c)
    s = c.canonical
    if s.total_dim > MAX_TOTAL_DIM:
        return []
    values = _flat(s)
    found = []
    for t in _load():
        if t.d != s.d:
            continue
        patterns = _patterns(t)
        for pattern in (patterns[:1] if ordered else patterns[1:]):
            binding = _unify(pattern, values)
            if binding is None:
                continue
            eig = [binding[p] for p in t.eigen_params]
            if len(set(eig)) != len(eig):
                continue
            if canonicalize(instantiate(t, binding)).canonical == s:
                found.append((t.id, binding))
                break
    return found


def match_template(c) -> tuple[str, dict[str, Scalar]] | None:
    """Template id and parameter values for an indecomposable system, or None.

    ``c`` is a CanonicalSystem or a SystemTriple (canonicalized first).  The
    returned binding instantiates to a system with the same canonical form.
    Templates read with their eigenvalues in ascending order take precedence;
    some entries differ only by that order (d121-07 and d121-08 swap λ and μ).
    """
    c = _as_canonical(c)
    if not is_indecomposable_by_links(c):
        raise NotIndecomposable(f"system with d={c.canonical.d} is a direct sum")
    found = match_all(c, ordered=True) or match_all(c, ordered=False)
    return found[0] if found else None


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def in_table_scope(s: SystemTriple) -> bool:
    """The table lists systems with a nonzero state space and at least one input or output."""
    return s.n > 0 and (s.m > 0 or s.l > 0) and s.total_dim <= MAX_TOTAL_DIM


@dataclass
class CatalogReport:
    checked_instantiations: int = 0
    fixed_point_failures: list[tuple[str, int]] = field(default_factory=list)
    indecomposability_failures: list[tuple[str, int]] = field(default_factory=list)
    trials: int = 0
    summands: int = 0
    out_of_scope: int = 0
    matches: dict[str, int] = field(default_factory=dict)
    unmatched: list[tuple[int, dict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.fixed_point_failures or self.indecomposability_failures or self.unmatched)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked_instantiations": self.checked_instantiations,
                "fixed_point_failures": [list(x) for x in self.fixed_point_failures],
                "indecomposability_failures": [list(x) for x in self.indecomposability_failures],
                "trials": self.trials, "summands": self.summands, "out_of_scope": self.out_of_scope,
                "matches": dict(sorted(self.matches.items())),
                "unmatched": [{"trial": i, "system": s} for i, s in self.unmatched]}


def check_template(t: Template, params) -> tuple[bool, bool]:
    """(is a fixed point, is indecomposable by both tests) for one instantiation."""
    s = instantiate(t, params)
    c = canonicalize(s)
    fixed = c.canonical == s
    indec = is_indecomposable_by_links(c) and is_indecomposable_by_local_ring(s)
    return fixed, indec


def verify_catalog(trials: int = 0, seed: int = 0, table: list[Template] | None = None) -> CatalogReport:
    """Fixed-point checks for every template, then random completeness sampling."""
    from .serialize import system_to_dict

    table = templates() if table is None else table
    report = CatalogReport()
    for t in table:
        for k, params in enumerate(PARAMETER_SETS):
            fixed, indec = check_template(t, params)
            report.checked_instantiations += 1
            if not fixed:
                report.fixed_point_failures.append((t.id, k))
            if not indec:
                report.indecomposability_failures.append((t.id, k))

    rng = random.Random(seed)
    for i in range(trials):
        s = random_table_system(rng)
        report.trials += 1
        for part in decompose(s):
            report.summands += 1
            if not in_table_scope(part.canonical):
                report.out_of_scope += 1
                continue
            hit = match_template(part)
            if hit is None:
                report.unmatched.append((i, system_to_dict(part.canonical)))
            else:
                report.matches[hit[0]] = report.matches.get(hit[0], 0) + 1
    return report


SCOPE_DIMENSIONS = tuple((m, n, l) for m in range(4) for n in range(1, 5) for l in range(4)
                         if m + l > 0 and m + n + l <= MAX_TOTAL_DIM)


def random_table_system(rng: random.Random) -> SystemTriple:
    """Random system with |d| <= 4, n > 0 and at least one input or output."""
    return random_system(rng, d=rng.choice(SCOPE_DIMENSIONS), pool=DEFAULT_POOL,
                         zero_bias=rng.choice((0.2, 0.4, 0.6)))


def summand_signature(s: SystemTriple) -> tuple:
    """Sorted multiset of the canonical summands of ``s`` (by serialized matrices)."""
    return tuple(sorted((p.canonical.d, tuple(format_scalar(x) for x in _flat(p.canonical)))
                        for p in decompose(s)))


def conjugate_randomly(rng: random.Random, s: SystemTriple) -> SystemTriple:
    return apply_group(random_group_element(rng, s.m, s.n, s.l), s)
