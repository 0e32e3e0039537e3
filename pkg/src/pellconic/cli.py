"""Command line front end: ``pellconic <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or domain error.
With ``--json`` every invocation prints one document with the keys
command, inputs, results and checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import analytic, conic, descent, factor, heights, modular, primality
from .forms import class_group_narrow
from .ntkernel import discriminant_from, pell4_fundamental
from .rings import QQ, ZZ, IntegersMod

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_HEADER = "delta,h,h_plus,u,w,R,R_C,sha2,cl_sq,tamagawa,lhs,rhs,residual".split(",")
MAX_ENUM_MOD = 20_000


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    code: int
    text: str
    document: dict = field(default_factory=dict)


# -- serialization --------------------------------------------------------


def _num(x):
    """Exact integers stay integers, reals get 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_num(v) for v in items]
    return str(x)


def _check(name, passed, lhs=None, rhs=None, residual=0.0):
    return {"name": name, "pass": bool(passed), "lhs": lhs, "rhs": rhs, "residual": residual}


class Report:
    """Collects results and checks for one invocation."""

    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.results = {}
        self.checks = []
        self.lines = []

    def check(self, *args, **kw):
        self.checks.append(_check(*args, **kw))

    def say(self, line=""):
        self.lines.append(str(line))

    @property
    def ok(self):
        return all(c["pass"] for c in self.checks)

    def document(self):
        return _num(
            {"command": self.command, "inputs": self.inputs, "results": self.results, "checks": self.checks}
        )

    def text(self):
        out = list(self.lines)
        for c in self.checks:
            out.append(f"[{'ok' if c['pass'] else 'FAIL'}] {c['name']}")
        return "\n".join(out)


# -- parsing helpers ------------------------------------------------------


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc


def parse_point(s: str):
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"point must look like x,y: {s!r}")
    x, y = (parse_rational(t) for t in parts)
    return (int(x) if x.denominator == 1 else x, int(y) if y.denominator == 1 else y)


def _fmt_point(P):
    return "(" + ",".join(str(c) for c in P) + ")"


def _point_on(disc, P, mod):
    if mod is None:
        if not conic.on_curve(disc, P):
            raise ValueError(f"{_fmt_point(P)} is not on X^2 - {disc}Y^2 = 4")
        return conic.point(*P), None
    R = IntegersMod(mod)
    try:
        Q = conic.ConicPoint(R.coerce(P[0]), R.coerce(P[1]))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"cannot reduce {_fmt_point(P)} mod {mod}") from exc
    if not conic.on_curve(disc, Q, R):
        raise ValueError(f"{_fmt_point(P)} is not on the conic mod {mod}")
    return Q, R


# -- commands -------------------------------------------------------------


def cmd_conic_info(a, rep):
    disc = discriminant_from(a.d)
    C = conic.PellConic(disc)
    rep.say(f"conic: {C}   (d = {a.d}, disc = {disc})")
    torsion, w = conic.torsion_points(disc)
    rep.results.update({"d": a.d, "disc": disc, "torsion": [list(T) for T in torsion], "w": w})
    rep.say(f"torsion: {', '.join(map(_fmt_point, torsion))}  (w = {w})")
    if disc > 0:
        f = pell4_fundamental(disc)
        rep.results.update(
            {"eta": list(f.point), "u": f.u, "minus4": list(f.minus4) if f.minus4 else None,
             "regulator_conic": heights.regulator(disc), "regulator_field": heights.field_regulator(disc)}
        )
        rep.say(f"fundamental point eta = {_fmt_point(f.point)}, u = {f.u}")
        rep.say(f"R(C) = {heights.regulator(disc):.12g}, R = {heights.field_regulator(disc):.12g}")
        rep.check("eta on conic", conic.on_curve(disc, f.point), list(f.point))
    cg = class_group_narrow(disc)
    rep.results.update({"h_plus": cg.h_plus, "h": cg.h_wide, "class_group": str(cg.invariants)})
    rep.say(f"Cl+ = {cg.invariants}  (h+ = {cg.h_plus}, h = {cg.h_wide})")


def cmd_add(a, rep):
    if len(a.point) != 2:
        raise UsageError("add needs --point twice")
    (P, R), (Q, _) = (_point_on(a.disc, X, a.mod) for X in a.point)
    S = conic.add(a.disc, P, Q, R)
    rep.results["sum"] = [_num_coord(c) for c in S]
    rep.say(f"{_fmt_point(P)} + {_fmt_point(Q)} = {_fmt_point(S)}")
    rep.check("sum on conic", conic.on_curve(a.disc, S, R))


def _num_coord(c):
    return c if isinstance(c, int) else Fraction(c)


def cmd_mul(a, rep):
    if len(a.point) != 1:
        raise UsageError("mul needs exactly one --point")
    P, R = _point_on(a.disc, a.point[0], a.mod)
    kP = conic.scalar_mul(a.disc, a.k, P, R)
    rep.results["kP"] = [_num_coord(c) for c in kP]
    rep.say(_fmt_point(kP))
    rep.check("kP on conic", conic.on_curve(a.disc, kP, R))
    ring = R or (QQ if isinstance(P[0], Fraction) else ZZ)
    lx = conic.lucas_x(abs(a.k), P[0], ring)
    rep.check("x-only ladder agrees", lx == kP[0], _num_coord(lx), _num_coord(kP[0]))


def cmd_points(a, rep):
    if a.mod > MAX_ENUM_MOD:
        raise ValueError(f"enumeration is limited to moduli <= {MAX_ENUM_MOD}")
    pts = modular.enumerate_points(a.disc, a.mod)
    rep.results.update({"count": len(pts), "points": sorted([list(P) for P in pts]) if len(pts) <= 200 else None})
    rep.say(f"#C(Z/{a.mod}) = {len(pts)}")
    if len(pts) <= 200:
        rep.say(" ".join(_fmt_point(P) for P in sorted(pts)))
    if a.mod % 2:
        expected = modular.order_mod(a.disc, a.mod)
        rep.results["formula"] = expected
        rep.check("count = formula", len(pts) == expected, len(pts), expected)


def cmd_structure(a, rep):
    table = modular.structure_mod_pk(a.disc, a.p, a.k)
    rep.results["table"] = list(table)
    rep.say(f"table: C(Z/{a.p}^{a.k}) = {table}")
    if a.p**a.k <= MAX_ENUM_MOD:
        found = modular.group_structure(a.disc, a.p**a.k)
        rep.results["enumerated"] = list(found)
        rep.say(f"enumeration: {found}")
        rep.check("table = enumeration", found == table, str(found), str(table))


def cmd_zeta(a, rep):
    Z = modular.local_zeta(a.disc, a.p)
    counts = Z.point_counts(3)
    rep.results.update({"zeta": str(Z), "N": counts})
    rep.say(f"Z_{a.p}(T) = {Z}")
    rep.say(f"N_1..N_3 = {counts}")
    enum = [modular.count_points(a.disc, a.p, f) for f in (1, 2, 3) if a.p**f <= MAX_ENUM_MOD]
    rep.results["enumerated"] = enum
    rep.check("expansion = enumeration", counts[: len(enum)] == enum, enum, counts[: len(enum)])
    alt = modular.displayed_zeta(a.disc, a.p)
    rep.results["displayed_form"] = {"zeta": str(alt), "N": alt.point_counts(3)}


def _outcome(rep, out):
    rep.results.update({"n": out.n, "verdict": str(out.verdict), "witness": out.witness})
    if out.factor:
        rep.results["factor"] = out.factor
    rep.say(f"{out.n}: {out.verdict}")


def cmd_primality(a, rep):
    if a.test == "lucas":
        out = primality.lucas_test(a.n, a.a)
    elif a.test == "pell":
        if a.point is not None:
            if a.disc is None:
                raise UsageError("--point needs --disc")
            out = primality.pell_test(a.n, a.disc, a.point)
        else:
            start = 3
            if a.seed is not None and a.n > 8:
                start = 3 + random.Random(a.seed).randrange(min(a.n - 4, 1000))
            out = primality.pell_prove(a.n, a.disc, start=start)
    else:
        out = primality.lucas_lehmer(a.p)
    _outcome(rep, out)


def cmd_factor(a, rep):
    seeds = None
    if a.seed is not None:
        pool = list(factor.P1_BASES if a.method == "p1" else factor.PELL_SEEDS)
        random.Random(a.seed).shuffle(pool)
        seeds = pool
    res = factor.factor_with_seeds(a.n, a.method, a.bound, seeds=seeds, first=True)
    rep.results.update({"status": str(res.status), "divisor": res.divisor, "iterations": res.iterations})
    rep.say(str(res))
    if res.found:
        ok = 1 < res.divisor < a.n and a.n % res.divisor == 0
        rep.check("divisor is proper", ok, res.divisor, a.n)


def cmd_descent(a, rep):
    r = descent.descent_report(a.disc)
    rep.results.update(
        {"image_alpha": r.image_alpha_full, "image_alpha_positive": r.image_alpha_positive,
         "selmer": r.selmer, "sha2_order": r.sha2_order, "sha2_reps": list(r.sha2_reps), "rank": r.rank}
    )
    rep.say(f"im alpha = {sorted(r.image_alpha_full)} (x > 0: {sorted(r.image_alpha_positive)})")
    rep.say(f"Sel_2 = {sorted(r.selmer)}, #Sha_2 = {r.sha2_order}, rank = {r.rank}")
    for a_ in sorted(r.selmer):
        T = descent.Descendant(a_, a.disc // a_)
        tag = "image" if a_ in r.image_alpha_positive else "locally solvable"
        rep.say(f"  {T}: {tag}")
    links = descent.verify_links(a.disc)
    rep.check("Sha_2 = Cl+^2[2]", links.sha_equals_cl2_2)
    rep.check("prod c_p = 2(Cl+ : Cl+^2)", links.tamagawa_equals_genus)
    rep.check("#im alpha = 2", links.image_has_rank_one)


def cmd_classgroup(a, rep):
    cg = class_group_narrow(a.disc)
    rep.results.update(
        {"h_plus": cg.h_plus, "h": cg.h_wide, "invariants": list(cg.invariants),
         "squares": cg.squares_order, "squares_2_torsion": cg.two_torsion_of_squares,
         "forms": [list(f) for f in cg.representatives]}
    )
    rep.say(f"Cl+({a.disc}) = {cg.invariants}, h+ = {cg.h_plus}, h = {cg.h_wide}")
    rep.say("forms: " + " ".join(str(tuple(f)) for f in cg.representatives))


def cmd_height(a, rep):
    P = a.point
    closed = heights.canonical_height(a.disc, P)
    limit = heights.canonical_height_limit(a.disc, P, a.k)
    naive = heights.point_height(P)
    rep.results.update({"naive": naive, "canonical": closed, "limit": limit, "k": a.k})
    rep.say(f"H(P) = {naive:.12g}, h^(P) = {closed:.12g}, H(2^{a.k}P)/2^{a.k} = {limit:.12g}")
    bound = math.log(2) / 2**a.k
    rep.check("limit within log2/2^k", abs(limit - closed) <= bound + 1e-12, limit, closed, abs(limit - closed))
    rep.check("|h^ - H| < log 4", abs(closed - naive) < math.log(4), closed, naive)


def cmd_lfunction(a, rep):
    value = analytic.l_chi_1(a.disc, a.tol)
    rep.results["L1"] = value
    rep.say(f"L(1, chi_{a.disc}) = {value:.12g}")
    if a.oracle:
        series, bound = analytic.l_chi_1_series(a.disc)
        rep.results.update({"series": series, "series_bound": bound})
        tol = max(a.tol, bound)
        rep.check("finite sum = series", abs(value - series) <= tol, value, series, abs(value - series))
    _, h, residual = analytic.class_number_residual(a.disc)
    rep.results.update({"h": h, "rounding_residual": residual})
    rep.say(f"h = {h} (rounding residual {residual:.3g})")
    rep.check("rounding residual < 0.01", residual < analytic.ROUNDING_LIMIT, h, None, residual)


def _bsd_record(disc):
    r = analytic.bsd_report(disc)
    return r.as_dict(), [
        _check(c.name, c.passed, c.lhs, c.rhs, c.residual) for c in r.checks
    ]


def _csv_text(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for d in records:
        w.writerow([_num(v) for v in (
            d["disc"], d["h"], d["h_plus"], d["u"], d["w"], d["R"], d["R_C"], d["sha2_order"],
            d["cl_squares_order"], d["tamagawa_product"], d["lhs"], d["rhs"], d["residual"],
        )])
    return buf.getvalue()


def cmd_bsd(a, rep):
    if a.action == "sweep":
        discs = analytic.fundamental_discs(1, a.max)
        workers = max(1, a.workers)
        if workers == 1:
            out = [_bsd_record(D) for D in discs]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                out = list(pool.map(_bsd_record, discs, chunksize=8))
        records = [d for d, _ in out]
        rep.results["records"] = records
        worst = max((d["residual"] for d in records), default=0.0)
        for D, (_, checks) in zip(discs, out):
            for c in checks:
                if not c["pass"]:
                    rep.checks.append({**c, "name": f"{c['name']} (disc {D})"})
        rep.check("all identities", all(c["pass"] for _, cs in out for c in cs), len(discs), None, worst)
        rep.say(f"{len(discs)} fundamental discriminants up to {a.max}, max residual {worst:.3g}")
        if a.csv:
            with open(a.csv, "w", newline="") as fh:
                fh.write(_csv_text(records))
        return
    if a.disc is None:
        raise UsageError("bsd needs --disc or the sweep action")
    d, checks = _bsd_record(a.disc)
    rep.results.update(d)
    rep.checks.extend(checks)
    rep.say(f"2hR/w = {d['lhs']:.12g}")
    rep.say(f"Omega*#Sha*R(C)*prod c_p/w = {d['rhs']:.12g}")
    rep.say(f"residual = {d['residual']:.3g}")


# -- parser ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="structured output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized searches")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the output here instead of stdout")

    p = _Parser(prog="pellconic", description="Arithmetic of Pell conics X^2 - disc*Y^2 = 4.",
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    sp = add("conic", cmd_conic_info, help="conic data for squarefree d")
    sp.add_argument("action", choices=["info"])
    sp.add_argument("--d", type=int, required=True)

    for name, func in (("add", cmd_add), ("mul", cmd_mul)):
        sp = add(name, func, help=f"{name} points")
        sp.add_argument("--disc", type=int, required=True)
        sp.add_argument("--point", type=parse_point, action="append", required=True)
        sp.add_argument("--k", type=int, default=1)
        sp.add_argument("--mod", type=int)

    sp = add("points", cmd_points, help="enumerate C(Z/n)")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--mod", type=int, required=True)

    sp = add("structure", cmd_structure, help="structure of C(Z/p^k)")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)

    sp = add("zeta", cmd_zeta, help="local zeta function")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("primality", cmd_primality, help="lucas | pell | mersenne")
    sp.add_argument("test", choices=["lucas", "pell", "mersenne"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--disc", type=int)
    sp.add_argument("--point", type=parse_point)
    sp.add_argument("--p", type=int)

    sp = add("factor", cmd_factor, help="stage-1 p-1 or conic p+-1")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=["p1", "pell"], default="pell")
    sp.add_argument("--bound", type=int, default=100)

    sp = add("descent", cmd_descent, help="first 2-descent")
    sp.add_argument("--disc", type=int, required=True)

    sp = add("classgroup", cmd_classgroup, help="narrow class group by forms")
    sp.add_argument("--disc", type=int, required=True)

    sp = add("height", cmd_height, help="naive and canonical heights")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--point", type=parse_point, required=True)
    sp.add_argument("--k", type=int, default=8)

    sp = add("lfunction", cmd_lfunction, help="L(1, chi) and the class number formula")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--oracle", action="store_true", help="also sum the Dirichlet series")

    sp = add("bsd", cmd_bsd, help="the BSD-style identity; 'bsd sweep' over many discs")
    sp.add_argument("action", nargs="?", choices=["sweep"])
    sp.add_argument("--disc", type=int)
    sp.add_argument("--max", type=int, default=300)
    sp.add_argument("--csv")
    sp.add_argument("--workers", type=int, default=1)
    return p


def _validate(a):
    if a.command == "primality":
        need = "p" if a.test == "mersenne" else "n"
        if getattr(a, need) is None:
            raise UsageError(f"primality {a.test} needs --{need}")


def _inputs(a):
    skip = {"func", "json", "out", "command"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(a).items()) if k not in skip}


def run(argv=None) -> CommandResult:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = build_parser().parse_args(argv)
        for name, default in (("json", False), ("seed", None), ("out", None)):
            if not hasattr(a, name):
                setattr(a, name, default)
        _validate(a)
    except UsageError as exc:
        return CommandResult(EXIT_USAGE, str(exc))
    command = a.command + (f" {a.action}" if getattr(a, "action", None) else "")
    if a.command == "primality":
        command += f" {a.test}"
    rep = Report(command, _num(_inputs(a)))
    try:
        a.func(a, rep)
    except UsageError as exc:
        return CommandResult(EXIT_USAGE, str(exc))
    except (ValueError, ArithmeticError) as exc:
        return CommandResult(EXIT_USAGE, f"error: {exc}")
    code = EXIT_OK if rep.ok else EXIT_FAIL
    doc = rep.document()
    if a.json:
        text = json.dumps(doc, sort_keys=True, indent=2)
    else:
        text = rep.text()
        if not rep.ok:
            failed = ", ".join(c["name"] for c in rep.checks if not c["pass"])
            text += f"\nverification failed: {failed}"
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
        text = f"wrote {a.out}"
    return CommandResult(code, text, doc)


def main(argv=None) -> int:
    res = run(argv)
    stream = sys.stdout if res.code != EXIT_USAGE else sys.stderr
    print(res.text, file=stream)
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
