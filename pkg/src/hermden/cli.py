"""Command line front end.

    hermden den|dden|geom|verify|scan|oracle|cache [options]

Exit status: 0 all checks passed, 1 an identity failed, 2 bad input,
3 an enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import pickle
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import density as D
from . import enumerate as E
from .enumerate import ResourceCapError
from .geom import NoValPrimeError, build_geom_table, delta_tau, derive_val_prime, int_report
from .hermlattice import (
    HermLattice,
    InvariantViolation,
    LatticeError,
    a_max,
    is_integral,
    lattice_from_gram,
    lattice_type,
    val_det,
)
from .laurent import HalfLaurent
from .localfield import Case, FieldData, FieldElem
from . import verify as V

CACHE_ENV = "HERMDEN_CACHE"
CACHE_FILE = "overlattices.pkl"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None, field_name: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field_name is not None:
            where.append(f"field {field_name}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field_name = field_name


# ---------------------------------------------------------------------------
# lattice input files

_KEYS = ("case", "p", "d", "n", "rank", "label", "conv", "eta")
_RAT = r"[+-]?\d+(?:/\d+)?"
_ENTRY_NONSPLIT = re.compile(
    rf"^\s*(?:(?P<a>{_RAT}))?\s*(?:(?P<sign>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*?\s*)?(?P<gen>[wd]))?\s*$"
)
_ENTRY_SPLIT = re.compile(rf"^\s*\(\s*(?P<a>{_RAT})\s*,\s*(?P<b>{_RAT})\s*\)\s*$")


@dataclass
class LatticeSpec:
    case: str
    p: int
    n: int
    rank: int
    gram: list  # rows of entry strings
    d: Fraction | None = None
    label: str = ""
    conv: str = "B"
    eta: str = "even"
    values: list = field(default_factory=list, repr=False)  # parsed FieldElem rows

    def field_data(self) -> FieldData:
        return FieldData.make(self.case, self.p, d=self.d, ramified_convention=self.conv, ramified_eta=self.eta)

    def lattice(self) -> HermLattice:
        return lattice_from_gram(self.field_data(), self.values)


def _parse_rational(text: str, line: int, name: str) -> Fraction:
    try:
        if not re.fullmatch(_RAT, text.strip()):
            raise ValueError
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"malformed rational {text!r}", line, name) from None


def parse_entry(fd: FieldData, text: str, line: int, name: str) -> FieldElem:
    """'a', 'a + b*w', 'b*w', '-w' (nonsplit; 'd' may stand for w) or '(a, b)' (split)."""
    if fd.split:
        m = _ENTRY_SPLIT.match(text)
        if m is None:
            if re.fullmatch(_RAT, text.strip()):
                return fd.from_base(_parse_rational(text, line, name))
            raise SpecError(f"malformed split entry {text!r}; expected (a, b)", line, name)
        return fd.elem(_parse_rational(m["a"], line, name), _parse_rational(m["b"], line, name))
    m = _ENTRY_NONSPLIT.match(text)
    if m is None or (m["a"] is None and m["gen"] is None):
        raise SpecError(f"malformed entry {text!r}", line, name)
    a = Fraction(m["a"]) if m["a"] else Fraction(0)
    b = Fraction(0)
    if m["gen"]:
        b = Fraction(m["b"]) if m["b"] else Fraction(1)
        if m["sign"] == "-":
            b = -b
        elif m["sign"] is None and m["a"] is not None:
            raise SpecError(f"malformed entry {text!r}", line, name)
    return fd.elem(a, b)


def _split_rows(block: str, line0: int) -> list[tuple[int, list[str]]]:
    """Rows of a gram block: a bracketed list, or one row per line with
    entries separated by commas, semicolons or whitespace."""
    text = block.strip()
    if text.startswith("["):
        inner = text
        if not inner.startswith("[["):
            inner = "[" + inner + "]"
        rows = re.findall(r"\[([^\[\]]*)\]", inner)
        return [(line0, _split_entries(r)) for r in rows]
    out = []
    for k, ln in enumerate(block.splitlines()):
        if ln.strip():
            for r in ln.split(";"):
                if r.strip():
                    out.append((line0 + k, _split_entries(r)))
    return out


def _split_entries(row: str) -> list[str]:
    # commas inside split-case parentheses are kept
    parts, depth, cur = [], 0, ""
    for ch in row:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    parts = [x.strip() for x in parts if x.strip()]
    if len(parts) == 1 and "(" not in parts[0] and re.search(r"\s", parts[0]) and "+" not in parts[0] and " - " not in parts[0]:
        parts = parts[0].split()
    return parts


def parse_spec(text: str) -> LatticeSpec:
    """Parse ``key = value`` pairs (one per line, or several separated by
    spaces) followed by a ``gram:`` block."""
    idx = text.find("gram:")
    if idx < 0:
        raise SpecError("missing gram: block", None, "gram")
    head, block = text[:idx], text[idx + len("gram:"):]
    gram_line = head.count("\n") + 1
    vals: dict[str, tuple[str, int]] = {}
    for lineno, ln in enumerate(head.splitlines(), start=1):
        ln = ln.split("#", 1)[0]
        for tok in re.findall(r"(\w+)\s*=\s*([^\s=]+)", ln):
            key, value = tok
            if key not in _KEYS:
                raise SpecError(f"unknown key {key!r}", lineno, key)
            vals[key] = (value, lineno)
        rest = re.sub(r"(\w+)\s*=\s*([^\s=]+)", "", ln).strip()
        if rest:
            raise SpecError(f"cannot parse {rest!r}", lineno, None)
    for key in ("case", "p"):
        if key not in vals:
            raise SpecError("missing required key", None, key)

    def as_int(key, default=None):
        if key not in vals:
            return default
        s, ln = vals[key]
        if not re.fullmatch(r"\d+", s):
            raise SpecError(f"expected a nonnegative integer, got {s!r}", ln, key)
        return int(s)

    case = vals["case"][0].lower()
    if case not in ("inert", "ramified", "split"):
        raise SpecError(f"case must be inert, ramified or split, got {case!r}", vals["case"][1], "case")
    p = as_int("p")
    d = _parse_rational(vals["d"][0], vals["d"][1], "d") if "d" in vals else None
    conv = vals.get("conv", ("B", 0))[0]
    eta = vals.get("eta", ("even", 0))[0]
    try:
        fd = FieldData.make(case, p, d=d, ramified_convention=conv, ramified_eta=eta)
    except ValueError as exc:
        ln = vals["p"][1]
        raise SpecError(str(exc), ln, "case") from None
    rows = _split_rows(block, gram_line)
    rank = as_int("rank", len(rows))
    n = as_int("n", rank + 1)
    if len(rows) != rank:
        raise SpecError(f"gram has {len(rows)} rows but rank = {rank}", gram_line, "rank")
    if not 1 <= rank <= n or rank < n - 1:
        raise SpecError(f"rank must be n or n - 1 (rank = {rank}, n = {n})", vals.get("rank", (0, gram_line))[1], "rank")
    values = []
    for i, (ln, row) in enumerate(rows):
        if len(row) != rank:
            raise SpecError(f"row {i + 1} has {len(row)} entries, expected {rank}", ln, "gram")
        values.append([parse_entry(fd, e, ln, f"gram({i + 1},{j + 1})") for j, e in enumerate(row)])
    for i in range(rank):
        for j in range(i + 1):
            if values[i][j] != values[j][i].conj():
                raise SpecError(
                    f"gram is not Hermitian at entry ({i + 1},{j + 1}): {values[i][j]} is not the conjugate of entry ({j + 1},{i + 1})",
                    rows[i][0], f"gram({i + 1},{j + 1})",
                )
    if fd.case is Case.RAMIFIED and n % 2:
        raise SpecError("the ramified case needs even n", vals.get("n", (0, None))[1], "n")
    return LatticeSpec(case, p, n, rank, [r for _, r in rows], d, vals.get("label", ("", 0))[0], conv, eta, values)


# ---------------------------------------------------------------------------
# output


def q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def poly_record(P: HalfLaurent) -> list:
    return [[f"{int(2 * k)}/2", q(v)] for k, v in P.items()]


class Out:
    def __init__(self, fmt: str, seed: int, stream=None):
        self.fmt = fmt
        self.seed = seed
        self.stream = stream or sys.stdout

    def emit(self, kind: str, inputs: dict, invariants: dict, outputs: dict):
        if self.fmt == "records":
            rec = {"kind": kind, "seed": self.seed, "inputs": inputs, "invariants": invariants, "outputs": outputs}
            self.stream.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
            return
        self.stream.write(f"[{kind}] " + " ".join(f"{k}={v}" for k, v in inputs.items()) + "\n")
        if invariants:
            self.stream.write("  invariants: " + " ".join(f"{k}={v}" for k, v in invariants.items()) + "\n")
        for k, v in outputs.items():
            self.stream.write(f"  {k}: {_human(v)}\n")


def _human(v) -> str:
    if isinstance(v, list) and v and all(isinstance(t, list) and len(t) == 2 and str(t[0]).endswith("/2") for t in v):
        return " + ".join(f"({c})*X^({e})" for e, c in v)
    return str(v)


def spec_inputs(spec: LatticeSpec) -> dict:
    out = {"case": spec.case, "p": spec.p, "n": spec.n, "rank": spec.rank, "gram": [list(r) for r in spec.gram]}
    if spec.case == "ramified":
        out["conv"] = spec.conv
        out["eta"] = spec.eta
    if spec.label:
        out["label"] = spec.label
    return out


def invariants(L: HermLattice) -> dict:
    if not is_integral(L):
        return {"integral": False, "val": val_det(L)}
    return {"integral": True, "val": val_det(L), "type": lattice_type(L), "a_max": a_max(L)}


# ---------------------------------------------------------------------------
# cache


def cache_dir(args) -> Path | None:
    d = args.cache or os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def load_cache(path: Path | None):
    if path is None:
        return
    f = path / CACHE_FILE
    if f.exists():
        with f.open("rb") as fh:
            E._MEMO.update(pickle.load(fh))


def save_cache(path: Path | None):
    if path is None:
        return
    path.mkdir(parents=True, exist_ok=True)
    tmp = path / (CACHE_FILE + ".tmp")
    with tmp.open("wb") as fh:
        pickle.dump(dict(E._MEMO), fh)
    tmp.replace(path / CACHE_FILE)


# ---------------------------------------------------------------------------
# commands


def _parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text.strip())
    if m:
        return list(range(int(m[1]), int(m[2]) + 1))
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SpecError(f"bad value range {text!r}; use a..b or a,b,c", None, "--vals") from None


def _ctx(spec: LatticeSpec, args) -> D.DenContext:
    return D.DenContext(spec.field_data(), spec.n, args.cap)


def cmd_den(spec, args, out) -> int:
    ctx = _ctx(spec, args)
    L = spec.lattice()
    outputs = {}
    if spec.rank == spec.n:
        outputs["Den(X,L)"] = poly_record(D.den_full(ctx, L))
    else:
        outputs["Den(q^2X,Lflat)"] = poly_record(D.den_corank1_q2(ctx, L)) if is_integral(L) else []
        for v in _parse_range(args.vals) if args.vals else []:
            S = D.vector_setup(L, v, 1)
            outputs[f"Den(X,L)[val(x)={v}]"] = poly_record(D.den_full(ctx, S.L))
    out.emit("den", spec_inputs(spec), invariants(L), outputs)
    return EXIT_OK


def _need_corank1(spec):
    if spec.rank != spec.n - 1:
        raise SpecError("this command needs rank = n - 1", None, "rank")


def cmd_dden(spec, args, out) -> int:
    _need_corank1(spec)
    ctx = _ctx(spec, args)
    L = spec.lattice()
    outputs = {
        "Den*": q(D.den_star_value(ctx, L)),
        "dDen*": q(D.partial_den_star(ctx, L)),
        "dDen*_H": q(D.partial_den_star_h(ctx, L)),
        "dDen*_V": q(D.partial_den_star_v(ctx, L)),
        "val'": D.val_prime(ctx, L),
    }
    out.emit("dden", spec_inputs(spec), invariants(L), outputs)
    return EXIT_OK


def cmd_geom(spec, args, out) -> int:
    _need_corank1(spec)
    ctx = _ctx(spec, args)
    L = spec.lattice()
    rep = int_report(ctx, L)
    outputs = {k: q(v) for k, v in rep.fields().items()}
    horiz = []
    for M in D.horizontal_lattices(ctx, L):
        horiz.append([
            [[str(e) for e in row] for row in M.gram_matrix()],
            derive_val_prime(ctx, M),
            q(D.den_star_prim(ctx, M)),
            q(delta_tau(ctx, M)),
        ])
    outputs["horizontal[gram,val',deg,delta_tau]"] = horiz
    table = build_geom_table(ctx, [L])
    outputs["table_consistent"] = table.consistent
    out.emit("geom", spec_inputs(spec), invariants(L), outputs)
    return EXIT_OK if table.consistent else EXIT_FAIL


def _report_out(out: Out, r: V.VerifyReport):
    outputs = {"status": r.status}
    if r.observed_threshold is not None:
        outputs["observed"] = r.observed_threshold
    if r.stated_threshold is not None:
        outputs["stated"] = r.stated_threshold
    if r.points:
        outputs["points"] = [[v, ok] for v, ok in r.points]
    if r.status == "fail":
        outputs["lhs"], outputs["rhs"] = r.lhs, r.rhs
    if r.reason:
        outputs["reason"] = r.reason
    out.emit(r.identity_id, {k: str(v) for k, v in sorted(r.params.items())}, {}, outputs)


def _exit_for(reports) -> int:
    if any(r.status == "fail" for r in reports):
        return EXIT_FAIL
    if any(r.status == "skipped" and r.reason.startswith("resource cap") for r in reports):
        return EXIT_CAP
    return EXIT_OK


def cmd_verify(spec, args, out) -> int:
    if spec is not None and args.suite == "theorem-smoke":
        # a single lattice instead of the default grid
        _need_corank1(spec)
        ctx = _ctx(spec, args)
        res = V.SuiteResult(args.suite, args.seed, V.theorem_reports(ctx, spec.lattice()))
    else:
        params = {"seed": args.seed}
        if args.instances is not None:
            params["instances"] = args.instances
        if spec is not None:
            params["p"] = spec.p
            params["cases"] = [spec.case]
        elif args.p_override is not None:
            params["p"] = args.p_override
        if spec is None and args.case:
            params["cases"] = [args.case]
        ctx = D.DenContext(FieldData.make("split", 3), 1, args.cap)
        res = V.run_suite(ctx, args.suite, params)
    for r in res.reports:
        _report_out(out, r)
    out.emit("summary", {"suite": args.suite}, {}, {**res.counts, "min_observed": res.min_observed()})
    return _exit_for(res.reports)


def cmd_scan(spec, args, out) -> int:
    _need_corank1(spec)
    ctx = _ctx(spec, args)
    L = spec.lattice()
    vals = _parse_range(args.vals or "1..6")
    thr = V.stated_threshold(ctx.fd, L, args.identity == "weak")
    sides = {"induction": V.induction_sides, "weak": V.weak_sides}[args.identity]
    status = EXIT_OK
    for v in vals:
        lhs, rhs = sides(ctx, L, v, 1)
        ok = lhs == rhs
        if v > thr and not ok:
            status = EXIT_FAIL
        outputs = {"holds": ok, "above_threshold": v > thr, "lhs": poly_record(lhs), "rhs": poly_record(rhs)}
        out.emit(f"scan-{args.identity}", dict(spec_inputs(spec), val_x=v), {"stated": thr}, outputs)
    return status


def cmd_oracle(spec, args, out) -> int:
    """Calibrate on <1>, <p> and test on <p^2> (rank 1); a given lattice is
    added to the holdout."""
    from .oracle import calibrate_and_compare

    case = spec.case if spec is not None else (args.case or "inert")
    p = spec.p if spec is not None else (args.p_override or 3)
    if case == "ramified":
        raise SpecError("the oracle covers the inert and split cases (rank-1 toy scale)", None, "case")
    fd = spec.field_data() if spec is not None else FieldData.make(case, p)
    ctx = D.DenContext(fd, 1, args.cap)
    training = [lattice_from_gram(fd, [[1]]), lattice_from_gram(fd, [[p]])]
    holdout = [lattice_from_gram(fd, [[p * p]])]
    if spec is not None:
        if spec.rank != 1:
            raise SpecError("the oracle takes rank-1 lattices", None, "rank")
        holdout.append(spec.lattice())
    rep = calibrate_and_compare(ctx, training, holdout, args.target)
    _report_out(out, rep)
    if rep.status == "fail":
        return EXIT_FAIL
    return EXIT_CAP if rep.reason.startswith("resource cap") else EXIT_OK


def cmd_cache(args, out) -> int:
    path = cache_dir(args)
    if path is None:
        raise SpecError(f"no cache directory: pass --cache or set {CACHE_ENV}", None, "--cache")
    action = args.action
    f = path / CACHE_FILE
    if action == "clear":
        if f.exists():
            f.unlink()
        E.cache_clear()
        out.emit("cache", {"dir": str(path), "action": "clear"}, {}, {"entries": 0})
        return EXIT_OK
    load_cache(path)
    keys = sorted(_cache_key_text(k) for k in E._MEMO)
    out.emit("cache", {"dir": str(path), "action": "list"}, {}, {"entries": len(keys), "keys": keys})
    return EXIT_OK


def _cache_key_text(k) -> str:
    tag, space, key = k
    gram = ";".join(" ".join(str(e) for e in row) for row in space.H)
    digest = hashlib.sha256(repr(key).encode()).hexdigest()[:16]
    return f"{tag}|{space.fd.label()}|[{gram}]|{digest}"


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="lattice specification file")
    common.add_argument("--case", choices=["inert", "ramified", "split"])
    common.add_argument("--p", dest="p_override", type=int)
    common.add_argument("--gram", help="inline gram block, rows separated by ';'")
    common.add_argument("--n", type=int, help="ambient rank (default rank + 1)")
    common.add_argument("--cap", type=int, default=D.DEFAULT_CAP)
    common.add_argument("--format", choices=["table", "records"], default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache", help=f"cache directory (default ${CACHE_ENV})")
    parser = argparse.ArgumentParser(prog="hermden", description="Exact local densities of Hermitian lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("den", parents=[common], help="Den(q^2 X, Lflat) and Den(X, L)").add_argument("--vals")
    sub.add_parser("dden", parents=[common], help="Den*, its derivative and H / V parts")
    sub.add_parser("geom", parents=[common], help="intersection report and delta_tau values")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", default="theorem-smoke", choices=list(V.SUITES))
    v.add_argument("--instances", type=int)
    s = sub.add_parser("scan", parents=[common], help="one record per val(x)")
    s.add_argument("--vals")
    s.add_argument("--identity", choices=["induction", "weak"], default="induction")
    o = sub.add_parser("oracle", parents=[common], help="point-count calibration")
    o.add_argument("--target", type=int, help="rank of the unimodular target")
    c = sub.add_parser("cache", parents=[common], help="list or clear the cache")
    c.add_argument("action", choices=["list", "clear"])
    return parser


def _load_spec(args, required: bool) -> LatticeSpec | None:
    text = None
    if args.spec:
        try:
            text = Path(args.spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise SpecError(f"cannot read spec file: {exc}") from None
    if text is None and args.gram is None:
        if required:
            raise SpecError("give --spec FILE or --case/--p/--gram")
        return None
    if text is None:
        text = ""
    # inline overrides replace keys of the file
    lines = [ln for ln in text.split("gram:", 1)[0].splitlines()]
    block = text.split("gram:", 1)[1] if "gram:" in text else ""
    over = {"case": args.case, "p": args.p_override, "n": args.n}
    for key, val in over.items():
        if val is not None:
            lines = [re.sub(rf"\b{key}\s*=\s*\S+", "", ln) for ln in lines]
            lines.append(f"{key} = {val}")
    if args.gram is not None:
        block = args.gram
        lines = [re.sub(r"\brank\s*=\s*\S+", "", ln) for ln in lines]
    return parse_spec("\n".join(lines) + "\ngram:" + block)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args.format, args.seed)
    try:
        if args.command == "cache":
            return cmd_cache(args, out)
        path = cache_dir(args)
        load_cache(path)
        needs = args.command in ("den", "dden", "geom", "scan")
        spec = _load_spec(args, needs)
        handler = {
            "den": cmd_den, "dden": cmd_dden, "geom": cmd_geom, "verify": cmd_verify,
            "scan": cmd_scan, "oracle": cmd_oracle,
        }[args.command]
        status = handler(spec, args, out)
        save_cache(path)
        return status
    except ResourceCapError as exc:
        print(f"hermden: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, LatticeError, NoValPrimeError, D.DivisibilityError, ValueError) as exc:
        print(f"hermden: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"hermden: invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
