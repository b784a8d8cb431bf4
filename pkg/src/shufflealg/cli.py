"""Command-line driver.

Reports are line oriented: a schema header, then
``STATUS<TAB>suite<TAB>instance<TAB>detail`` lines.  Exit status 0 when every
line passes, 1 on any failure, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA = "# shufflealg-report v1"
WORKERS_ENV = "SHUFFLEALG_WORKERS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    presentation: str | None = None
    window: tuple = (0, 1)
    grading: tuple | None = None
    t: int | None = None
    degree: int | None = None
    expr: str | None = None
    seed: int = 0
    output: str | None = None
    workers: int = 1
    flags: dict = field(default_factory=dict)


def parse_window(s):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", s)
    if not m:
        raise ConfigError(f"window must look like lo..hi, got {s!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ConfigError(f"empty window {s!r}")
    return lo, hi


def parse_grading(s):
    try:
        g = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise ConfigError(f"grading must be comma separated integers, got {s!r}") from None
    if any(x < 0 for x in g):
        raise ConfigError("grading entries must be non-negative")
    return g


def _datum(name):
    from .presentations import get_datum
    try:
        return get_datum(name)
    except KeyError as e:
        raise ConfigError(str(e)) from None


# ---------------------------------------------------------------------------
# expressions: sums of products of generators and root vectors
#
#   expr   := term (('+' | '-') term)*
#   term   := [rational '*'] factor ('*' factor)*
#   factor := atom | '(' expr ')' | '[' expr ',' expr ']' ['_' int]
#   atom   := p<k> | q<k> | r<k> (sl21)  |  e<i>(<k>)  |  E_<root>(<k>)
#
# '*' between elements is the shuffle product; [A, B]_a is the super
# bracket with twist v^a.

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*(),\[\]]))")


class ExprError(ConfigError):
    pass


def _tokens(s):
    pos, out = 0, []
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ExprError(f"cannot parse expression near {s[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


class _Parser:
    def __init__(self, text, datum, order=None):
        self.toks = _tokens(text)
        self.i = 0
        self.datum = datum
        self.order = order

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, val=None):
        tok = self.peek()
        if tok[0] is None or (val is not None and tok[1] != val):
            raise ExprError(f"expected {val or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.i != len(self.toks):
            raise ExprError(f"trailing input at {self.peek()[1]!r}")
        return e

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        coeff = Fraction(1)
        if self.peek()[1] == "-":
            self.take()
            coeff = -coeff
        if self.peek()[0] == "num":
            coeff *= Fraction(self.take()[1])
            self.take("*")
        out = self.factor()
        while self.peek()[1] == "*":
            self.take()
            out = out * self.factor()
        if coeff != 1:
            from gmpy2 import mpq
            out = out.scale(mpq(coeff.numerator, coeff.denominator))
        return out

    def _mode(self):
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val = self.take()
        if kind != "num" or "/" in val:
            raise ExprError(f"bad mode {val!r}")
        return sign * int(val)

    def factor(self):
        from .presentations import super_bracket, generator_image, root_vector_image
        from .families import vpow
        kind, val = self.peek()
        if val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if val == "[":
            self.take()
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            tw = 0
            kind, val = self.peek()
            if kind == "name" and re.fullmatch(r"_\d*", val):
                self.take()
                tw = int(val[1:]) if len(val) > 1 else self._mode()
            return super_bracket(a, b, vpow(tw, 0, self.order))
        if kind != "name":
            raise ExprError(f"unexpected {val!r}")
        self.take()
        d = self.datum
        m = re.fullmatch(r"([pqr])(\d*)", val)
        if m and d.id == "SL21_ODD":
            if m.group(2):
                k = int(m.group(2))
            else:
                self.take("(")
                k = self._mode()
                self.take(")")
            if m.group(1) == "r":
                return root_vector_image(d, "g", k, self.order)
            return generator_image(d, 1 if m.group(1) == "p" else 2, k, self.order)
        m = re.fullmatch(r"e(\d+)", val)
        if m:
            self.take("(")
            k = self._mode()
            self.take(")")
            i = int(m.group(1))
            if not 1 <= i <= d.rank:
                raise ExprError(f"generator e{i} outside 1..{d.rank}")
            return generator_image(d, i, k, self.order)
        m = re.fullmatch(r"E_(\w+)", val)
        if m:
            self.take("(")
            k = self._mode()
            self.take(")")
            try:
                d.root(m.group(1))
            except KeyError:
                raise ExprError(f"unknown root {m.group(1)!r}") from None
            return root_vector_image(d, m.group(1), k, self.order)
        raise ExprError(f"unknown atom {val!r}")


def parse_expression(text, datum, order=None):
    return _Parser(text, datum, order).parse()


# ---------------------------------------------------------------------------
# commands

def _emit(cfg, lines):
    text = "\n".join([SCHEMA] + lines) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _run_parallel(fn, jobs, workers):
    """Map fn over jobs; results come back in job order whatever the worker count."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def _relation_job(job):
    from .presentations import check_relations, check_comm_lemmas, get_datum
    kind, name, window = job
    if kind == "relations":
        return check_relations(get_datum(name), window)
    return check_comm_lemmas(window)


def cmd_verify_relations(cfg):
    d = _datum(cfg.presentation)
    jobs = [("relations", d.id, cfg.window)]
    if d.id == "SL21_ODD" and not cfg.flags.get("no_comm"):
        jobs.append(("comm", d.id, cfg.window))
    results = [r for rs in _run_parallel(_relation_job, jobs, cfg.workers) for r in rs]
    _emit(cfg, [r.line() for r in results])
    return 0 if all(r.ok for r in results) else 1


def cmd_pbw(cfg):
    from .pbw import enumerate_h, pbw_image, independence_rank
    from .presentations import CheckResult
    from .specialization import phi_d, lower_degrees, expected_phi, unit_ratio
    d = _datum(cfg.presentation)
    grading = cfg.grading or (0,) * d.rank
    if len(grading) != d.rank:
        raise ConfigError(f"{d.id} needs a grading of length {d.rank}")
    hs = enumerate_h(d, grading, cfg.window)
    imgs = [pbw_image(h) for h in hs]
    rank = independence_rank(imgs, seed=cfg.seed) if imgs else 0
    inst = f"{d.id}{tuple(grading)}[{cfg.window[0]}..{cfg.window[1]}]"
    lines = [CheckResult("PASS" if rank == len(hs) else "FAIL", "pbw.rank", inst,
                         f"rank {rank} of {len(hs)}")]
    if any(grading):
        for h, F in zip(hs, imgs):
            below = all(phi_d(F, dl).is_zero() for dl in lower_degrees(d, h.degree()))
            c = unit_ratio(phi_d(F, h.degree()), expected_phi(h))
            ok = below and c is not None
            detail = f"unit={c}" if ok else ("nonzero below own degree" if not below else "expected image mismatch")
            lines.append(CheckResult("PASS" if ok else "FAIL", "pbw.phi", f"{inst}:{h}", detail))
    _emit(cfg, [r.line() for r in lines])
    return 0 if all(r.ok for r in lines) else 1


def _rou_job(job):
    from . import rootofunity as R
    kind, t, arg, deg = job
    if kind == "lambda":
        return R.lambda_dimension_row(t, arg, deg)
    return R.s_dimension_row(t, arg, deg)


def cmd_rou(cfg):
    from . import rootofunity as R
    from .presentations import CheckResult
    t = cfg.t
    if t is None or t < 1:
        raise ConfigError("--t must be a positive integer")
    lines = []
    ok = True
    # nilpotency of gamma powers
    if t == 1:
        from .presentations import root_vector_image, SL21_ODD
        for k in (0, 1):
            z = root_vector_image(SL21_ODD, "g", k, 2).is_zero()
            ok &= z
            lines.append(CheckResult("PASS" if z else "FAIL", "rou.nilpotency", f"t=1,k={k}",
                                     "degenerate: v=-1 kills the root vector r_k itself").line())
    for k in ((0, 1) if t > 1 else ()):
        for m in range(1, t + 2):
            z, expect = R.gamma_nilpotency(k, m, t)
            good = z == expect
            ok &= good
            lines.append(CheckResult("PASS" if good else "FAIL", "rou.nilpotency", f"t={t},k={k},m={m}",
                                     "zero" if z else "nonzero").line())
    if cfg.flags.get("nilpotency"):
        _emit(cfg, lines)
        return 0 if ok else 1
    if t == 1:
        lines.append(CheckResult("PASS", "rou.admissible", "t=1",
                                 "vacuous: multiplicity bound t-1 = 0 admits no gamma modes").line())
    for g in R.toy_generators(t):
        ok &= g["ok"]
        lines.append(CheckResult("PASS" if g["ok"] else "FAIL", "rou.toy", f"t={t}:{g['name']}", g["detail"]).line())
    grading = cfg.grading or (t, t)
    if len(grading) != 2:
        raise ConfigError("root-of-unity grading is (n, m)")
    top = cfg.degree if cfg.degree is not None else 2 * sum(grading)
    jobs = [("lambda", t, tuple(grading), D) for D in range(top + 1)]
    if cfg.flags.get("s_n"):
        jobs += [("s", t, cfg.flags["s_n"], D) for D in range(top + 1)]
    rows = _run_parallel(_rou_job, jobs, cfg.workers)
    lines.append("# t\tgrading\tdegree\t#admissible\tspan\twheel\tresult")
    for row in rows:
        ok &= row.equal
        lines.append(row.line())
    _emit(cfg, lines)
    return 0 if ok else 1


def cmd_eval(cfg):
    d = _datum(cfg.presentation)
    F = parse_expression(cfg.expr, d)
    sys.stdout.write(json.dumps(F.to_json(), indent=1) + "\n")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump(F.to_json(), fh, indent=1)
    return 0


def cmd_decompose(cfg):
    from .pbw import pbw_decompose, recompose, NotInSpan
    from .presentations import CheckResult
    d = _datum(cfg.presentation)
    F = parse_expression(cfg.expr, d)
    if F.is_zero():
        _emit(cfg, ["PASS\tdecompose\t0\tzero element"])
        return 0
    lo, hi = cfg.window
    try:
        coeffs = pbw_decompose(d, F, cfg.window, widen=cfg.flags.get("widen", 1))
    except NotInSpan as e:
        w = cfg.flags.get("widen", 1) + 1
        _emit(cfg, [CheckResult("FAIL", "decompose", cfg.expr,
                                f"{e}; try --window {lo - w}..{hi + w}").line()])
        return 1
    res = F - recompose(d, coeffs, F.grading)
    lines = [f"{h}\t{c}" for h, c in sorted(coeffs.items(), key=lambda it: str(it[0]))]
    lines.append(CheckResult("PASS" if res.is_zero() else "FAIL", "decompose.residual", cfg.expr,
                             f"{len(coeffs)} terms").line())
    _emit(cfg, lines)
    return 0 if res.is_zero() else 1


COMMANDS = {
    "verify-relations": cmd_verify_relations,
    "pbw": cmd_pbw,
    "rou": cmd_rou,
    "eval": cmd_eval,
    "decompose": cmd_decompose,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="shufflealg", description="Exact shuffle-algebra verification suites.")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", "-o")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-relations")
    p.add_argument("--presentation", required=True)
    p.add_argument("--window", default="-1..1")
    p.add_argument("--no-comm", action="store_true", help="skip the sl(2|1) bracket lemmas")

    p = sub.add_parser("pbw")
    p.add_argument("--presentation", required=True)
    p.add_argument("--grading")
    p.add_argument("--window", default="0..1")

    p = sub.add_parser("rou")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--grading")
    p.add_argument("--degree", type=int)
    p.add_argument("--nilpotency", action="store_true")
    p.add_argument("--s-n", type=int, help="also compare dimensions in S with this many variables")

    for name in ("eval", "decompose"):
        p = sub.add_parser(name)
        p.add_argument("--presentation", required=True)
        p.add_argument("expr")
        if name == "decompose":
            p.add_argument("--window", default="0..1")
            p.add_argument("--widen", type=int, default=1)
    return ap


def config_from_args(ns):
    workers = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = max(1, int(workers))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    cfg = RunConfig(command=ns.command, seed=ns.seed, output=ns.output, workers=workers)
    cfg.presentation = getattr(ns, "presentation", None)
    if getattr(ns, "window", None):
        cfg.window = parse_window(ns.window)
    if getattr(ns, "grading", None):
        cfg.grading = parse_grading(ns.grading)
    cfg.t = getattr(ns, "t", None)
    cfg.degree = getattr(ns, "degree", None)
    cfg.expr = getattr(ns, "expr", None)
    for key in ("no_comm", "nilpotency", "s_n", "widen"):
        if getattr(ns, key, None) is not None:
            cfg.flags[key] = getattr(ns, key)
    return cfg


def _join_negative_values(argv):
    # argparse reads "-2..2" as an option; glue it onto its flag
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--window", "--degree", "--t"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-"):
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def main(argv=None):
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = ap.parse_args(_join_negative_values(argv))
    try:
        cfg = config_from_args(ns)
        if cfg.presentation is not None:
            _datum(cfg.presentation)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
