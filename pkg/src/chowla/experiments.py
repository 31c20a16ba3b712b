"""Convergence experiments: averages of parity channels over growing regions.

For a fixed irreducible binary cubic form, region shape, and optional lattice
coset, compute the average of a parity channel over the integer points of the
region scaled by each N in a schedule, and compare the decay of the average
against a slowly-varying envelope.  Output is a deterministic CSV table whose
bytes do not depend on the thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .cubic_form import BinaryCubicForm
from .factor_sieve import parity_grid
from .region_lattice import ConvexRegion, LatticeCoset

__all__ = [
    "envelope",
    "canonical_alpha",
    "ConvergenceRow",
    "ExperimentConfig",
    "chowla_average",
    "convergence_table",
    "write_table",
    "CSV_HEADER",
]

CSV_HEADER = "N,points,sum,average,envelope,ratio"

_E_TO_E = math.exp(math.e)

_ALPHAS = ("mu", "lambda", "omega")
_ALPHA_ALIASES = {"liouville": "lambda", "omega_sign": "omega"}


def canonical_alpha(name: str) -> str:
    """Map accepted channel spellings onto {mu, lambda, omega}."""
    key = name.strip().lower()
    key = _ALPHA_ALIASES.get(key, key)
    if key not in _ALPHAS:
        raise ValueError(f"unknown parity channel {name!r}")
    return key


def envelope(N: float, eps: float = 1.0) -> Optional[float]:
    """(log log N)^4 (log log log N)^eps / log N, defined for N > e^e."""
    if N <= _E_TO_E:
        return None
    ln = math.log(N)
    lln = math.log(ln)
    llln = math.log(lln)
    return lln**4 * llln**eps / ln


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    points: int
    total: int
    average: float
    envelope: Optional[float]
    ratio: Optional[float]

    def csv(self) -> str:
        env = "NA" if self.envelope is None else _fmt(self.envelope)
        rat = "NA" if self.ratio is None else _fmt(self.ratio)
        return f"{self.N},{self.points},{self.total},{_fmt(self.average)},{env},{rat}"


@dataclass
class ExperimentConfig:
    form: BinaryCubicForm
    alpha: str
    region: ConvexRegion
    region_text: str
    N_list: Sequence[int]
    coset: Optional[LatticeCoset] = None
    coset_text: Optional[str] = None
    coprime_only: bool = False
    epsilon: float = 1.0
    threads: int = 1
    out: Optional[str] = None

    def __post_init__(self):
        self.alpha = canonical_alpha(self.alpha)
        ns = list(self.N_list)
        if not ns or any(n <= 0 for n in ns):
            raise ValueError("N schedule must be positive")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("N schedule must be strictly increasing")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def chowla_average(cfg: ExperimentConfig, N: int) -> ConvergenceRow:
    """One row: average the chosen channel over the N-scaled region."""
    region = cfg.region.scale(N)
    grid = parity_grid(
        cfg.form,
        region,
        cfg.coset,
        coprime_only=cfg.coprime_only,
        threads=cfg.threads,
    )
    total = grid.sum_for(cfg.alpha)
    points = grid.points
    average = total / points if points else 0.0
    env = envelope(N, cfg.epsilon)
    ratio = None if env is None else average / env
    return ConvergenceRow(N, points, total, average, env, ratio)


def convergence_table(cfg: ExperimentConfig) -> list[ConvergenceRow]:
    rows = [chowla_average(cfg, N) for N in cfg.N_list]
    if cfg.out is not None:
        write_table(cfg.out, rows)
    return rows


def write_table(path: str, rows: Sequence[ConvergenceRow]) -> None:
    lines = [CSV_HEADER] + [r.csv() for r in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
