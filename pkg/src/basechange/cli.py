"""Command-line driver for the verification sweeps.

Subcommands::

    verify-counts      closed counts vs tree oracle vs lattice oracle
    verify-integrals   summation vs closed form for both integrals
    verify-fl          twisted integral of z_mu vs orbital integral of z_{f mu}
    oracle-lattice     tally relative positions for one lattice instance
    oracle-tree        tally relative positions for one fixed-set geometry
    show-admissible    the admissible set of mu
    show-bernstein     Bernstein coefficients of z_mu

Settings come from a flat config file (``key = value`` per line, ``#`` starts a
comment, lists are comma separated, cocharacters are written ``i:j``).  The
file named by ``--config`` or, failing that, by ``$BASECHANGE_CONFIG`` is read
first and command-line flags override it.  Recognized keys: ``q p f a d_T mu
ramified radius precision format out jobs formal``.

Exit status is 1 when any certified comparison disagrees and 0 otherwise.
Output is deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import counts as counts_mod
from . import integrals as integrals_mod
from .bernstein import bernstein_function
from .counts import CaseParams, InvalidCaseParams
from .lattice import (
    DEFAULT_RADII,
    Building,
    Instance,
    empirical_counts,
    fixed_geometry,
    instance_grid,
    observed_d_T,
    ramified_instance,
    ramified_twisted_instance,
    split_twisted_instance,
    unramified_instance,
)
from .scalar import QSqrt, Scalar
from .tree import VARIANTS, FixedSetSpec, TruncTree, counts_params_for, tally
from .weyl import Cocharacter, WeylElt, admissible_set, bar, elements_of

SCHEMA = "basechange-report/1"
CONFIG_ENV = "BASECHANGE_CONFIG"
FORMATS = ("text", "csv", "json")
COLUMNS = ("check", "case", "item", "lhs", "rhs", "certified", "status")


class ConfigError(ValueError):
    pass


# configuration


@dataclass
class SweepConfig:
    q: list[int] | None = None
    p: list[int] | None = None
    f: list[int] | None = None
    a: list[int] | None = None
    d_T: list[int] = field(default_factory=lambda: [0])
    mu: list[Cocharacter] | None = None
    ramified: list[bool] | None = None
    radius: int | None = None
    precision: int = 40
    format: str = "text"
    out: str | None = None
    jobs: int = 1
    formal: bool = False

    def validate(self) -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        for d in self.d_T:
            if d != 0:
                raise ConfigError("only d_T = 0 is realized")
        if self.precision < 10:
            raise ConfigError("precision below 10 digits is not supported")
        for p in self.p or ():
            if p == 2 or not counts_mod.is_prime_power(p) or any(p % k == 0 for k in range(2, p)):
                raise ConfigError(f"p={p} must be an odd prime")
        for mu in self.mu or ():
            if not mu.dominant:
                raise ConfigError(f"mu={mu.i}:{mu.j} is not dominant")
        # every CaseParams the grid can produce must be valid
        for q, f, a in itertools.product(self.q or [2], self.f or [1], self.a or [0]):
            try:
                CaseParams(q=q, f=f, a=a, ramified=True)
            except InvalidCaseParams as exc:
                raise ConfigError(str(exc)) from exc


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _bools(text: str) -> list[bool]:
    out = []
    for x in text.replace(" ", "").split(","):
        if x.lower() in ("1", "true", "yes", "ram", "ramified"):
            out.append(True)
        elif x.lower() in ("0", "false", "no", "unram", "unramified"):
            out.append(False)
        elif x.lower() == "both":
            out += [False, True]
        elif x:
            raise ConfigError(f"bad ramification flag {x!r}")
    return out


def parse_mu(text: str) -> list[Cocharacter]:
    out = []
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        try:
            i, j = item.split(":")
            out.append(Cocharacter(int(i), int(j)))
        except ValueError as exc:
            raise ConfigError(f"bad cocharacter {item!r}; write i:j") from exc
    return out


_PARSERS = {
    "q": _ints,
    "p": _ints,
    "f": _ints,
    "a": _ints,
    "d_T": _ints,
    "mu": parse_mu,
    "ramified": _bools,
    "radius": int,
    "precision": int,
    "format": str.strip,
    "out": str.strip,
    "jobs": int,
    "formal": lambda t: _bools(t)[0],
}


def read_config(path: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, val = (x.strip() for x in line.split("=", 1))
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _PARSERS[key](val)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return values


def build_config(args: argparse.Namespace) -> SweepConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    values = read_config(path) if path else {}
    for f in fields(SweepConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = _PARSERS[f.name](flag) if isinstance(flag, str) and f.name not in ("format", "out") else flag
    cfg = SweepConfig(**values)
    cfg.validate()
    return cfg


# records and output


@dataclass
class Record:
    check: str
    case: str
    item: str
    lhs: str
    rhs: str
    certified: bool
    status: str
    item_kind: str = "w"
    lhs_value: float | None = None
    rhs_value: float | None = None

    @property
    def failed(self) -> bool:
        return self.certified and self.status == "MISMATCH"


def _value(x: Any) -> tuple[str, float | None]:
    if isinstance(x, QSqrt):
        return str(x), float(x.a) + float(x.b) * math.sqrt(x.q)
    if isinstance(x, (int, Fraction)):
        return str(x), float(x)
    return str(x), None


def _record(check, case, item, lhs, rhs, *, certified=True, kind="w", q=None, status=None) -> Record:
    ls, lv = _value(lhs)
    rs, rv = _value(rhs)
    if isinstance(lhs, Scalar) and q is not None:
        lv = _value(lhs.evaluate(q))[1]
        rv = _value(rhs.evaluate(q))[1]
    if status is None:
        status = ("OK" if lhs == rhs else "MISMATCH") if certified else "UNCERTIFIED"
    return Record(check, case, str(item), ls, rs, certified, status, kind, lv, rv)


def render(records: Sequence[Record], fmt: str, command: str) -> str:
    ok = not any(r.failed for r in records)
    if fmt == "json":
        rows = []
        for r in records:
            d = {"check": r.check, "case": r.case, ("mu" if r.item_kind == "mu" else "w"): r.item}
            d.update(lhs=r.lhs, rhs=r.rhs, lhs_value=r.lhs_value, rhs_value=r.rhs_value)
            d.update(certified=r.certified, status=r.status)
            rows.append(d)
        return json.dumps({"schema": SCHEMA, "command": command, "ok": ok, "records": rows}, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in records:
            w.writerow([r.check, r.case, r.item, r.lhs, r.rhs, int(r.certified), r.status])
        return buf.getvalue()
    table = [COLUMNS] + [(r.check, r.case, r.item, r.lhs, r.rhs, "yes" if r.certified else "no", r.status) for r in records]
    widths = [max(len(row[i]) for row in table) for i in range(len(COLUMNS))]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip() for row in table]
    n_bad = sum(r.failed for r in records)
    lines.append(f"# {command}: {len(records)} rows, {n_bad} mismatches, {'OK' if ok else 'FAILED'}")
    return "\n".join(lines) + "\n"


def emit(records: list[Record], cfg: SweepConfig, command: str) -> int:
    text = render(records, cfg.format, command)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.failed for r in records) else 0


# grids


def case_grid(cfg: SweepConfig, s_values: Iterable[int] = (-1, 0, 1, 2)) -> list[CaseParams]:
    out = []
    for q, f, ram, s, a in itertools.product(
        cfg.q or [2, 3, 4, 5, 7, 9], cfg.f or [1, 2, 3], cfg.ramified or [False, True], s_values, cfg.a or range(5)
    ):
        split = (not ram) and f % 2 == 0
        for e in (0, 2) if split and s % 2 == 0 else (None,):
            out.append(CaseParams(q=q, f=f, a=a, ramified=ram, s=s, split_in_E=split, eigen_diff_mod4=e))
    return out


def _mus(cfg: SweepConfig, max_len: int = 6) -> list[Cocharacter]:
    if cfg.mu:
        return list(cfg.mu)
    return [Cocharacter(i, i - ell) for ell in range(max_len + 1) for i in range(-4, 5)]


# verify-integrals / verify-fl


def cmd_verify_integrals(cfg: SweepConfig) -> list[Record]:
    I = integrals_mod
    recs = []
    for p in case_grid(cfg):
        for mu in _mus(cfg):
            matching = mu.size == p.s
            if not matching and cfg.mu is None and abs(mu.size - p.s) > 1:
                continue
            label = p.label()
            if cfg.formal:
                pairs = [
                    ("twisted", I.twisted_sum_formal(mu, p), I.twisted_closed_formal(mu, p)),
                    ("orbital", I.orbital_sum_formal(mu, p), I.orbital_closed_formal(mu, p)),
                ]
            else:
                pairs = [
                    ("twisted", I.twisted_sum(mu, p), I.twisted_closed(mu, p)),
                    ("orbital", I.orbital_sum(mu, p), I.orbital_closed(mu, p)),
                ]
            for check, lhs, rhs in pairs:
                if not matching:
                    check += "-size-mismatch"
                    status = "OK" if lhs == rhs and lhs.is_zero() else "MISMATCH"
                    recs.append(_record(check, label, f"{mu.i}:{mu.j}", lhs, rhs, kind="mu", q=p.q, status=status))
                else:
                    recs.append(_record(check, label, f"{mu.i}:{mu.j}", lhs, rhs, kind="mu", q=p.q))
    return recs


def cmd_verify_fl(cfg: SweepConfig) -> list[Record]:
    I = integrals_mod
    recs = []
    for p in case_grid(cfg):
        for mu in _mus(cfg):
            if mu.size != p.s:
                continue
            r = I.check_fundamental_lemma(mu, p, formal=cfg.formal)
            status = ("DEGENERATE" if r.degenerate else "OK") if r.agree else "MISMATCH"
            recs.append(_record("fl", p.label(), f"{mu.i}:{mu.j}", r.twisted_sum, r.orbital_sum, kind="mu", q=p.q, status=status))
    # gamma with f not dividing val det gamma is not a norm
    for q, f, ram, a in itertools.product(cfg.q or [2, 3, 4, 5, 7, 9], cfg.f or [1, 2, 3], cfg.ramified or [False, True], cfg.a or range(5)):
        for sg in range(-2, 4):
            if sg % f == 0 or (not ram and sg % 2):
                continue
            pg = CaseParams(q=q, a=a, ramified=ram, s=sg)
            for mu in _mus(cfg):
                r = I.check_not_a_norm(mu, f, pg)
                recs.append(
                    _record("not-a-norm", f"{pg.label()},f={f}", f"{mu.i}:{mu.j}", r.summation_value, r.closed_value,
                            kind="mu", status="OK" if r.agree else "MISMATCH")
                )
    return recs


# verify-counts and the oracles


def _tree_records(spec: FixedSetSpec, radius: int) -> list[Record]:
    res = tally(spec, TruncTree.for_spec(spec, radius))
    params, use_bar = counts_params_for(spec)
    top = 2 * res.certified_max_r + (0 if spec.variant == VARIANTS[0] else -1)
    label = f"tree:{spec.variant}(q={spec.q},f={spec.f},a={spec.a},type={spec.center_type})"
    recs = []
    for n in range(top + 1):
        for w in elements_of(n, params.s):
            key = (w.m, w.b)
            formula = counts_mod.count_delta_sigma(bar(w) if use_bar else w, params)
            recs.append(_record("tree", label, w, formula, res.counts.get(key, 0)))
    return recs


def _tree_specs(cfg: SweepConfig) -> list[FixedSetSpec]:
    out = []
    for v, q, f, a, c in itertools.product(VARIANTS, cfg.q or [2, 3], cfg.f or [1, 2], cfg.a or [0, 1, 2], (0, 1)):
        if (v != VARIANTS[2] and c) or (v == VARIANTS[0] and a):
            continue
        out.append(FixedSetSpec(v, q=q, f=f, a=a, center_type=c))
    return out


def lattice_records(inst: Instance, radius: int) -> list[Record]:
    building = Building(inst.field)
    tal = empirical_counts(building, inst.g, twisted=inst.twisted, radius=radius)
    geo = fixed_geometry(building, tal)
    count = counts_mod.count_delta_sigma if inst.twisted else counts_mod.count_gamma
    label = f"lattice:{inst.name},R={radius}"
    recs = [
        _record("lattice-geometry", label, "kind", inst.expected_kind, geo.kind, certified=tal.complete),
        _record("lattice-geometry", label, "consistent", True, geo.consistent, certified=tal.complete),
    ]
    if geo.kind != "flip":
        recs.append(_record("lattice-geometry", label, "radius", inst.params.a, geo.radius, certified=tal.complete))
        recs.append(_record("lattice-geometry", label, "d_T", 0, observed_d_T(inst, geo), certified=tal.complete))
    if inst.params.split_in_E and geo.kind == "ball-vertex":
        recs.append(_record("lattice-geometry", label, "centre-type", inst.params.eigen_diff_mod4 // 2,
                            building.vertex_type(geo.centre[0]), certified=tal.complete))
    elif not inst.twisted and not inst.params.ramified:
        recs.append(_record("lattice-geometry", label, "centre", str((building.v0,)), str(geo.centre), certified=tal.complete))
    certified = set(tal.certified_elements())
    top = max(tal.certified_max_length + 2, 2)
    for n in range(top + 1):
        for w in elements_of(n, tal.shift):
            ok = w in certified
            recs.append(_record("lattice", label, w, count(w, inst.params), tal.counts[0].get(w, 0), certified=ok))
            recs.append(_record("lattice-size-shift", label, w, tal.counts[0].get(w, 0), tal.counts[1].get(bar(w), 0), certified=ok))
    return recs


def _lattice_job(args):
    inst, radius = args
    return lattice_records(inst, radius)


def _lattice_instances(cfg: SweepConfig) -> list[tuple[Instance, int]]:
    out = []
    for p in cfg.p or [3]:
        for f in cfg.f or [1, 2]:
            if f not in (1, 2):
                continue
            radius = cfg.radius or DEFAULT_RADII.get((p, f), 3)
            for inst in instance_grid(p, f, cfg.precision):
                if cfg.a is not None and inst.params.a not in cfg.a:
                    continue
                if cfg.ramified is not None and inst.params.ramified not in cfg.ramified:
                    continue
                out.append((inst, radius))
    return out


def _run_lattice(jobs: list, n_jobs: int) -> list[Record]:
    if n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(n_jobs) as ex:
            parts = list(ex.map(_lattice_job, jobs))
    else:
        parts = [_lattice_job(j) for j in jobs]
    return [r for part in parts for r in part]


def cmd_verify_counts(cfg: SweepConfig) -> list[Record]:
    recs = []
    radius = cfg.radius or 6
    for spec in _tree_specs(cfg):
        recs += _tree_records(spec, radius)
    recs += _run_lattice(_lattice_instances(cfg), cfg.jobs)
    return recs


def cmd_oracle_tree(cfg: SweepConfig, variant: str, center_type: int) -> list[Record]:
    recs = []
    for q, f, a in itertools.product(cfg.q or [2], cfg.f or [1], cfg.a or [0]):
        recs += _tree_records(FixedSetSpec(variant, q=q, f=f, a=a, center_type=center_type), cfg.radius or 6)
    return recs


def make_instance(p: int, f: int, a: int, ramified: bool, s: int, eigen_diff: int, prec: int) -> Instance:
    if f == 1:
        if ramified:
            return ramified_instance(p, a, s, prec)
        return unramified_instance(p, a, s, prec)
    if f != 2:
        raise ConfigError("the lattice oracle realizes f in {1, 2}")
    if ramified:
        return ramified_twisted_instance(p, a, s, prec)
    if s % 2:
        m, n = (s + 1) // 2, (s - 1) // 2
    else:
        m, n = s // 2 + eigen_diff // 2, s // 2 - eigen_diff // 2
    return split_twisted_instance(p, a, m, n, prec)


def cmd_oracle_lattice(cfg: SweepConfig, s: int, eigen_diff: int) -> list[Record]:
    jobs = []
    for p, f, a, ram in itertools.product(cfg.p or [3], cfg.f or [1], cfg.a or [0], cfg.ramified or [False]):
        inst = make_instance(p, f, 0 if s % 2 else a, ram, s, eigen_diff, cfg.precision)
        jobs.append((inst, cfg.radius or DEFAULT_RADII.get((p, f), 3)))
    return _run_lattice(jobs, cfg.jobs)


# display commands


def cmd_show_admissible(cfg: SweepConfig) -> str:
    lines = []
    for mu in cfg.mu or [Cocharacter(0, -1)]:
        ws = admissible_set(mu)
        lines.append(f"mu=({mu.i},{mu.j}) size={mu.size} length={mu.length}: " + " ".join(str(w) for w in ws))
    return "\n".join(lines) + "\n"


def cmd_show_bernstein(cfg: SweepConfig) -> str:
    lines = []
    for mu, f in itertools.product(cfg.mu or [Cocharacter(1, 0)], cfg.f or [1]):
        z = bernstein_function(mu, f)
        lines.append(f"z_mu for mu=({mu.i},{mu.j}), f={f}:")
        for w in sorted(z.support, key=lambda w: (w.length, -w.m)):
            lines.append(f"  {str(w):12s} {z[w]}")
    return "\n".join(lines) + "\n"


# argument parsing


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help=f"flat key=value config file (default: ${CONFIG_ENV})")
    sp.add_argument("--q", help="comma-separated residue field sizes")
    sp.add_argument("--p", help="comma-separated odd primes for the lattice oracle")
    sp.add_argument("--f", help="comma-separated extension degrees")
    sp.add_argument("--a", help="comma-separated values of a")
    sp.add_argument("--mu", help="cocharacters as i:j, comma separated")
    sp.add_argument("--ramified", help="true, false or both")
    sp.add_argument("--radius", type=int, help="oracle radius")
    sp.add_argument("--precision", type=int, help="p-adic precision in digits")
    sp.add_argument("--format", choices=FORMATS)
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--jobs", type=int, help="worker processes for the lattice oracle")
    sp.add_argument("--formal", action="store_true", default=None, help="compare in Q(u) instead of Q[sqrt q]")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="basechange", description="Exact verification sweeps for GL_2 base change.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("verify-counts", "verify-integrals", "verify-fl", "show-admissible", "show-bernstein"):
        _common(sub.add_parser(name))
    sp = sub.add_parser("oracle-tree")
    _common(sp)
    sp.add_argument("--variant", choices=VARIANTS, default=VARIANTS[2])
    sp.add_argument("--center-type", type=int, choices=(0, 1), default=0)
    sp = sub.add_parser("oracle-lattice")
    _common(sp)
    sp.add_argument("--s", type=int, default=0, help="valuation of det delta")
    sp.add_argument("--eigen-diff", type=int, choices=(0, 2), default=0)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        cmd = args.command
        if cmd == "show-admissible":
            return _print(cmd_show_admissible(cfg), cfg)
        if cmd == "show-bernstein":
            return _print(cmd_show_bernstein(cfg), cfg)
        if cmd == "verify-counts":
            recs = cmd_verify_counts(cfg)
        elif cmd == "verify-integrals":
            recs = cmd_verify_integrals(cfg)
        elif cmd == "verify-fl":
            recs = cmd_verify_fl(cfg)
        elif cmd == "oracle-tree":
            recs = cmd_oracle_tree(cfg, args.variant, args.center_type)
        else:
            recs = cmd_oracle_lattice(cfg, args.s, args.eigen_diff)
    except (ConfigError, InvalidCaseParams, ValueError) as exc:
        print(f"basechange: error: {exc}", file=sys.stderr)
        return 2
    return emit(recs, cfg, cmd)


def _print(text: str, cfg: SweepConfig) -> int:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
