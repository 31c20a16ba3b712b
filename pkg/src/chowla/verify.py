"""Self-verification suites behind the `chowla verify` command.

Three suites, each a batch of exact checks over seeded-random inputs plus a
few pinned examples, reporting one CSV line per check:

* ``identities`` — the seven-window divisor identity, its two coarser
  groupings, the complement-map flip of Mobius window sums, and the
  divisor-pairing bound.
* ``postulates`` — the three density laws for cubic-form value sequences
  on three (form, coset) configurations, with the full per-ideal report
  written alongside.
* ``sieve`` — grid parity sieve against direct trial division,
  Mobius-integrity of the Brun weight tables, the even-truncation upper
  bound, the Buchstab telescope, and the divisor-window exchange.

Exact assertion failures make the suite exit nonzero and serialize the
first counterexample; measured-only quantities are reported but never
affect the exit status.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .cubic_form import BinaryCubicForm
from .factor_sieve import mu as mu_int, liouville, omega_sign, parity_grid
from .ideal_arith import (
    CubicField,
    Ideal,
    build_field,
    mu_ideal,
    norm,
    prime_ideals_up_to,
)
from .postulates import DensityModel, build_sequence, check_postulates_123
from .region_lattice import parse_coset, parse_region
from .sieve_weights import (
    anti_sieve_split,
    brun_pure_weights,
    buchstab_split,
    integer_brun_weights,
    sieve_value,
)
from .vaughan import (
    VaughanParams,
    beta_all,
    pairing_bound,
    verify_groupings,
    verify_identity,
    window_flip,
)

__all__ = ["SUITES", "CheckResult", "run_suite"]

SUITES = ("identities", "postulates", "sieve", "all")

_SEED = 20260822

REPORT_HEADER = "check,cases,failures,status,detail"


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    failures: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def csv(self) -> str:
        status = "pass" if self.ok else "fail"
        detail = self.detail.replace(",", ";").replace("\n", " ")
        return f"{self.name},{self.cases},{self.failures},{status},{detail}"


# ------------------------------------------------------------- helpers


def _field_pool() -> list[tuple[CubicField, list]]:
    pools = []
    for coeffs in ((1, 0, 0, 2), (1, -1, 0, 1)):
        K = build_field(BinaryCubicForm(*coeffs))
        pools.append((K, sorted(prime_ideals_up_to(K, 80))))
    return pools


def _random_ideal(rng: random.Random, primes: list, max_primes: int = 4) -> Ideal:
    k = rng.randint(0, min(max_primes, len(primes)))
    chosen = rng.sample(primes, k)
    return Ideal.from_factors((q, rng.randint(1, 3)) for q in chosen)


def _random_params(rng: random.Random, q_pool) -> VaughanParams:
    cuts = sorted(rng.randint(1, 600) for _ in range(3))
    den = rng.randint(1, 7)
    y, u, w = (Fraction(c, den) for c in cuts)
    Q = rng.sample(q_pool, rng.randint(0, min(2, len(q_pool))))
    return VaughanParams.make(y, u, w, Q)


def _memo_h(rng: random.Random) -> Callable[[Ideal], int]:
    memo: dict[Ideal, int] = {}

    def h(d: Ideal) -> int:
        if d not in memo:
            memo[d] = rng.randint(-5, 5)
        return memo[d]

    return h


# ------------------------------------------------------------- suites


def suite_identities(rng: random.Random) -> list[CheckResult]:
    pools = _field_pool()
    id_fail = 0
    id_detail = ""
    grp_fail = 0
    grp_detail = ""
    n_id = 300
    for _ in range(n_id):
        K, primes = pools[rng.randrange(len(pools))]
        a = _random_ideal(rng, primes)
        P = _random_params(rng, [q for q, _ in a.factors])
        h = _memo_h(rng)
        if not verify_identity(a, h, P):
            id_fail += 1
            if not id_detail:
                id_detail = f"a={a!r} params=({P.y};{P.u};{P.w}) Q={sorted(P.Q)!r}"
        if not verify_groupings(a, h, P):
            grp_fail += 1
            if not grp_detail:
                grp_detail = f"a={a!r} params=({P.y};{P.u};{P.w})"

    flip_fail = 0
    flip_detail = ""
    pair_fail = 0
    pair_detail = ""
    n_flip = 200
    for _ in range(n_flip):
        K, primes = pools[rng.randrange(len(pools))]
        e = _random_ideal(rng, primes)
        while e.is_unit:
            e = _random_ideal(rng, primes)
        u = Fraction(rng.randint(1, 500), rng.randint(1, 5))
        rec = window_flip(e, u)
        if not rec.ok:
            flip_fail += 1
            if not flip_detail:
                flip_detail = f"e={e!r} u={u}"
        l = max(q.norm for q, _ in e.factors)
        y = Fraction(rng.randint(1, 400), rng.randint(1, 3))
        lhs, rhs = pairing_bound(e, y, l)
        if lhs > rhs:
            pair_fail += 1
            if not pair_detail:
                pair_detail = f"e={e!r} y={y} l={l} lhs={lhs} rhs={rhs}"

    return [
        CheckResult("seven_window_identity", n_id, id_fail, id_detail),
        CheckResult("window_groupings", n_id, grp_fail, grp_detail),
        CheckResult("mobius_window_flip", n_flip, flip_fail, flip_detail),
        CheckResult("divisor_pairing_bound", n_flip, pair_fail, pair_detail),
    ]


_POSTULATE_CONFIGS = (
    ("1,0,0,2", None),
    ("1,0,0,2", "coset:5,0,1,1;0,0"),
    ("1,-1,0,1", "coset:2,0,1,2;1,0"),
)


def suite_postulates(out_dir: Optional[str]) -> list[CheckResult]:
    region = parse_region("box:-1,1,-1,1").scale(30)
    results = []
    for k, (form_text, coset_text) in enumerate(_POSTULATE_CONFIGS, start=1):
        a, b, c, d = (int(t) for t in form_text.split(","))
        K = build_field(BinaryCubicForm(a, b, c, d))
        L = parse_coset(coset_text) if coset_text else None
        seq = build_sequence(K, region, L)
        model = DensityModel(K, L)
        report = check_postulates_123(seq, model, 500)
        fails = report.failures()
        detail = fails[0].csv().replace(",", ";") if fails else ""
        exact_rows = [r for r in report.rows if r.status != "NA"]
        results.append(
            CheckResult(f"density_laws_config{k}", len(exact_rows), len(fails), detail)
        )
        if out_dir is not None:
            path = os.path.join(out_dir, f"postulates_{k}.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("postulate,params,ratio,status\n")
                for row in report.rows:
                    fh.write(row.csv() + "\n")
    return results


def suite_sieve(
    rng: random.Random, corrupt: Optional[Callable] = None
) -> list[CheckResult]:
    # 1. parity grid against per-point trial division
    form = BinaryCubicForm(1, 0, 0, 2)
    region = parse_region("box:-1,1,-1,1").scale(25)
    grid = parity_grid(form, region, keep_arrays=True)
    grid_fail = 0
    grid_detail = ""
    cases = 0
    for y in range(-25, 26):
        for x in range(-25, 26):
            cases += 1
            v = form(x, y)
            want = (0, 0, 0) if v == 0 else (mu_int(v), liouville(v), omega_sign(v))
            got = tuple(int(g[y + 25, x + 25]) for g in (grid.mu, grid.lam, grid.omg))
            if got != want:
                grid_fail += 1
                if not grid_detail:
                    grid_detail = f"(x;y)=({x};{y}) got={got} want={want}"

    # 2. Mobius integrity of the weight table (fault-injection target)
    K = build_field(form)
    primes = sorted(prime_ideals_up_to(K, 40))
    W = brun_pure_weights(primes, 200)
    if corrupt is not None:
        corrupt(W)
    wt_fail = 0
    wt_detail = ""
    for d, wt in sorted(W.weights.items(), key=lambda kv: (norm(kv[0]), repr(kv[0]))):
        if wt != mu_ideal(d):
            wt_fail += 1
            if not wt_detail:
                wt_detail = f"b={d!r} weight={wt} mobius={mu_ideal(d)}"

    # 3. even-truncation upper bound at infinite cut
    bon_fail = 0
    bon_detail = ""
    n_bon = 150
    for _ in range(n_bon):
        depth = rng.choice((2, 4, 6))
        Wb = brun_pure_weights(primes[: rng.randint(1, 8)], math.inf, depth)
        b = _random_ideal(rng, primes, max_primes=5)
        s = sieve_value(Wb, b)
        coprime = all(q not in Wb.P for q, _ in b.factors)
        if s < (1 if coprime else 0):
            bon_fail += 1
            if not bon_detail:
                bon_detail = f"b={b!r} depth={depth} value={s}"

    # 4. Buchstab telescope
    buch_fail = 0
    buch_detail = ""
    n_buch = 150
    for _ in range(n_buch):
        depth = rng.choice((2, 4))
        cut = rng.randint(20, 300)
        Wb = brun_pure_weights(primes[: rng.randint(1, 8)], cut, depth)
        b = _random_ideal(rng, primes, max_primes=5)
        try:
            main, tail = buchstab_split(Wb, b)
            if main - tail != 1:
                raise ArithmeticError
        except (ValueError, ArithmeticError) as exc:
            buch_fail += 1
            if not buch_detail:
                buch_detail = f"b={b!r} cut={cut} depth={depth} err={exc}"

    # 5. divisor-window exchange (pinned all-ones table + random sparse tables)
    anti_fail = 0
    anti_detail = ""
    Wi = integer_brun_weights(4, 60, 2)
    F = {(a, b): 1 for a in range(1, 101) for b in range(1, 101)}
    rec = anti_sieve_split(F, 100, Fraction(1, 2), 2, Wi)
    n_anti = 1
    if not (rec.identity_ok and rec.cov_ok):
        anti_fail += 1
        anti_detail = (
            f"all-ones window={rec.window_sum} weighted={rec.weighted_sum} "
            f"corr={rec.correction} cov={rec.correction_cov}"
        )
    for _ in range(100):
        n_anti += 1
        table = {
            (rng.randint(1, 400), rng.randint(1, 60)): rng.randint(-3, 3)
            for _ in range(rng.randint(1, 25))
        }
        x = rng.randint(20, 2000)
        alpha = rng.choice(
            (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4), Fraction(1))
        )
        yv = rng.randint(2, 6)
        Wc = integer_brun_weights(yv * yv, rng.randint(yv * yv + 1, 120), 2)
        rec = anti_sieve_split(table, x, alpha, yv, Wc)
        if not (rec.identity_ok and rec.cov_ok):
            anti_fail += 1
            if not anti_detail:
                anti_detail = f"x={x} alpha={alpha} y={yv} table={sorted(table)!r}"

    return [
        CheckResult("grid_vs_trial_division", cases, grid_fail, grid_detail),
        CheckResult("weights_are_mobius", len(W.weights), wt_fail, wt_detail),
        CheckResult("upper_bound_truncation", n_bon, bon_fail, bon_detail),
        CheckResult("buchstab_telescope", n_buch, buch_fail, buch_detail),
        CheckResult("divisor_window_exchange", n_anti, anti_fail, anti_detail),
    ]


# ------------------------------------------------------------- driver


def run_suite(
    name: str,
    out_dir: str = "verify_reports",
    seed: int = _SEED,
    echo: Optional[Callable[[str], None]] = None,
    _corrupt: Optional[Callable] = None,
) -> int:
    """Run one suite (or all); write CSV reports; 0 iff every exact check passed."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    os.makedirs(out_dir, exist_ok=True)
    chosen = ("identities", "postulates", "sieve") if name == "all" else (name,)
    exit_code = 0
    for suite in chosen:
        rng = random.Random(seed)
        if suite == "identities":
            results = suite_identities(rng)
        elif suite == "postulates":
            results = suite_postulates(out_dir)
        else:
            results = suite_sieve(rng, corrupt=_corrupt)
        path = os.path.join(out_dir, f"verify_{suite}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(REPORT_HEADER + "\n")
            for res in results:
                fh.write(res.csv() + "\n")
        for res in results:
            if echo is not None:
                status = "PASS" if res.ok else "FAIL"
                echo(f"[{status}] {suite}:{res.name} ({res.cases} cases)")
                if not res.ok:
                    echo(f"    first counterexample: {res.detail}")
            if not res.ok:
                exit_code = 1
    return exit_code
