"""Command-line front end.

    conicgroups keygen  --bits 1024 --mode robust --seed 1 --out key
    conicgroups encrypt --pub key.pub --mx 2 --my 1 --out msg.ct
    conicgroups decrypt --priv key.priv --ct msg.ct
    conicgroups pow     --law redei --modulus 7 --D 3 --m 2 --n 3 --engine modified-more
    conicgroups redei   --n 3 --D 3 --z 2 --modulus 7
    conicgroups bench   --bits 256 --n-bits 128 --engines direct,more,modified-more --format md
    conicgroups verify  --max-prime 101

Results go to stdout, diagnostics to stderr.  Exit status 1 on a
mathematical failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import engines, oracle, params, redei, rsa
from .geometry import Central, Parabola
from .residue import Modulus, NonInvertible, Residue, is_probable_prime, random_prime, sqrt_mod


class UsageError(Exception):
    pass


def _modulus(n: int) -> Modulus:
    if n < 3 or n % 2 == 0:
        raise UsageError("--modulus must be odd and >= 3")
    return Modulus(n, "prime") if is_probable_prime(n) else Modulus.opaque(n)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _rng(seed) -> random.Random:
    return random.Random(seed) if seed is not None else random.Random()


# --- subcommands ------------------------------------------------------------


def cmd_keygen(args, out):
    pk, sk = rsa.keygen(args.bits, args.mode, _rng(args.seed), args.e)
    if args.out:
        _write(args.out + ".pub", rsa.serialize_public(pk))
        _write(args.out + ".priv", rsa.serialize_private(sk))
        out.write(f"wrote {args.out}.pub and {args.out}.priv\n")
    else:
        out.write(rsa.serialize_public(pk))
        out.write(rsa.serialize_private(sk))


def cmd_encrypt(args, out):
    pk = rsa.parse_public(_read(args.pub))
    ct = rsa.encrypt(pk, rsa.Plaintext(args.mx, args.my))
    text = rsa.serialize_ct(ct)
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)


def cmd_decrypt(args, out):
    sk = rsa.parse_private(_read(args.priv))
    ct = rsa.parse_ct(_read(args.ct), sk.modulus)
    pt = rsa.decrypt(sk, ct)
    out.write(f"Mx={pt.Mx}\nMy={pt.My}\n")


def _build_law(args, mod: Modulus):
    r = lambda v: Residue(v, mod)  # noqa: E731
    if args.law == "redei":
        return params.RedeiNorm(r(args.D))
    if args.law == "eq2":
        u = args.u
        if u is None:
            u = sqrt_mod(args.ell, mod.value) if mod.is_prime else (1 if args.ell == 1 else None)
            if u is None:
                raise UsageError("--ell is not a square; pass --u or use --law eq3")
        return params.SlopeSquareEll(r(args.D), r(u))
    if args.law == "eq3":
        if args.alpha is None or args.beta is None:
            raise UsageError("--law eq3 needs --alpha and --beta")
        ell = args.ell if args.ell_given else (args.alpha**2 - args.D * args.beta**2)
        return params.SlopeGeneralEll(r(args.D), r(ell), r(args.alpha), r(args.beta))
    if args.e is None:
        raise UsageError("--law eq4 needs --e")
    return params.ParabolaSlope(r(args.e), r(args.alpha or 0), r(args.k or 0))


def cmd_pow(args, out):
    mod = _modulus(args.modulus)
    if args.D is None and args.law != "eq4":
        raise UsageError(f"--law {args.law} needs --D")
    args.ell_given = args.ell is not None
    if args.ell is None:
        args.ell = 1
    law = _build_law(args, mod)
    m = params.parse_param(args.m, mod)
    report = engines.run_engine(args.engine, law, m, args.n)
    if args.report:
        out.write(engines.CSV_HEADER + "\n" + report.csv_row() + "\n")
    else:
        out.write(params.format_param(report.result) + "\n")


def cmd_redei(args, out):
    mod = _modulus(args.modulus)
    D, z = Residue(args.D, mod), Residue(args.z, mod)
    pair = redei.redei_eval_matrix(args.n, D, z)
    q = redei.redei_rational(args.n, D, z)
    out.write(f"N={pair.num}\nD={pair.den}\nQ={params.format_param(q)}\n")


_BENCH_ALIASES = {"direct": "direct-eq2"}


def bench_case(engine: str, mod: Modulus, n: int, rng: random.Random):
    p = mod.value
    rand = lambda: Residue(rng.randrange(1, p), mod)  # noqa: E731
    if engine == "direct-eq2":
        return engines.direct_power(params.SlopeSquareEll(rand(), Residue(1, mod)), params.Finite(rand()), n)
    if engine == "direct-eq3":
        while True:
            D, al, be = rand(), rand(), rand()
            ell = al * al - D * be * be
            if not ell.is_zero():
                break
        law = params.SlopeGeneralEll(D, ell, al, be)
        return engines.direct_power(law, params.Finite(rand()), n)
    if engine == "direct-eq4":
        law = params.ParabolaSlope(rand(), rand(), rand())
        return engines.direct_power(law, params.Finite(rand()), n)
    D, x = rand(), rand()
    zero = Residue(0, mod)
    fn = engines.more_power if engine == "more" else engines.modified_more_power
    return fn(n, zero, D, x)


def cmd_bench(args, out):
    rng = random.Random(args.seed)
    names = [_BENCH_ALIASES.get(e.strip(), e.strip()) for e in args.engines.split(",") if e.strip()]
    for e in names:
        if e not in engines.ENGINES:
            raise UsageError(f"unknown engine {e!r}; choose from {', '.join(engines.ENGINES)}")
    mod = Modulus(random_prime(args.bits, rng), "prime")
    rows, more_rows = [], None
    for trial in range(args.trials):
        n = rng.getrandbits(args.n_bits) | (1 << (args.n_bits - 1))
        for e in names:
            case_rng = random.Random(rng.getrandbits(64))
            t0 = time.perf_counter()
            rep = bench_case(e, mod, n, case_rng)
            dt = time.perf_counter() - t0
            rows.append((rep, dt))
            if e == "more" and more_rows is None:
                more_rows = engines.more_count_report(n, rep.tally)
    if args.format == "csv":
        header = engines.CSV_HEADER + ",mismatch" + (",seconds" if args.timing else "")
        out.write(header + "\n")
        for rep, dt in rows:
            line = rep.csv_row() + "," + rep.mismatch
            if args.timing:
                line += f",{dt:.6f}"
            out.write(line + "\n")
        return
    cols = ["engine", "n", "ell", "w", "P", "A", "I", "exp P", "exp A", "exp I", "mismatch"]
    if args.timing:
        cols.append("seconds")
    out.write(f"modulus: {args.bits}-bit prime, n: {args.n_bits} bits, trials: {args.trials}\n\n")
    out.write("| " + " | ".join(cols) + " |\n")
    out.write("|" + "---|" * len(cols) + "\n")
    for rep, dt in rows:
        cells = rep.csv_row().split(",") + [rep.mismatch or "-"]
        if args.timing:
            cells.append(f"{dt:.6f}")
        out.write("| " + " | ".join(cells) + " |\n")
    if more_rows is not None:
        out.write("\nMore, first trial, measured against each reference cost estimate:\n\n")
        out.write("| source | P | A | I | differs |\n|---|---|---|---|---|\n")
        for row in more_rows:
            out.write("| " + " | ".join(str(c) if c != "" else "-" for c in row) + " |\n")


def cmd_verify(args, out, err):
    ok = True
    out.write(oracle.CENSUS_HEADER + "\n")
    for p in oracle.odd_primes(args.max_prime):
        mod = Modulus(p, "prime")
        specs = [
            Central(Residue(oracle.nonresidue(p), mod), Residue(1, mod)),
            Central(Residue(1, mod), Residue(1, mod)),
            Parabola(Residue(1, mod), Residue(0, mod)),
        ]
        for spec in specs:
            c = oracle.order_census(spec, p)
            out.write(c.csv_row() + "\n")
            if c.total != p + 1 or not c.is_cyclic:
                ok = False
                err.write(f"census failed at p={p}: {c}\n")
        if p <= args.cross_max:
            for spec in specs:
                try:
                    oracle.cross_validate(oracle.law_for(spec))
                except oracle.CrossValidationError as exc:
                    ok = False
                    err.write(f"cross-validation failed at p={p}: {exc}\n")
    return 0 if ok else 1


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conicgroups", description="Point groups on conics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--bits", type=int, default=1024)
    p.add_argument("--mode", choices=(rsa.STRICT, rsa.ROBUST), default=rsa.ROBUST)
    p.add_argument("--seed", type=int)
    p.add_argument("--e", type=int, help="public exponent (default 65537 when admissible)")
    p.add_argument("--out", help="path prefix for <out>.pub and <out>.priv")

    p = sub.add_parser("encrypt", help="encrypt a point (Mx, My)")
    p.add_argument("--pub", required=True)
    p.add_argument("--mx", type=int, required=True)
    p.add_argument("--my", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    p.add_argument("--priv", required=True)
    p.add_argument("--ct", required=True)

    p = sub.add_parser("pow", help="m^(+)n in a parameter group")
    p.add_argument("--law", choices=("redei", "eq2", "eq3", "eq4"), required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--D", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--u", type=int, help="square root of ell (eq2)")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", required=True, help="decimal or INF")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--engine", default="direct",
                   choices=("naive", "direct", "more", "modified-more", "matrix"))
    p.add_argument("--report", action="store_true", help="print the CSV engine report")

    p = sub.add_parser("redei", help="evaluate Redei polynomials and Q_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)

    p = sub.add_parser("bench", help="operation counts of the engines")
    p.add_argument("--bits", type=int, default=256)
    p.add_argument("--n-bits", type=int, default=128)
    p.add_argument("--engines", default="direct-eq2,direct-eq3,direct-eq4,more,modified-more")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="append wall-clock seconds (not reproducible)")

    p = sub.add_parser("verify", help="brute-force census over small primes")
    p.add_argument("--max-prime", type=int, default=101)
    p.add_argument("--cross-max", type=int, default=31,
                   help="also cross-validate laws against geometry for p up to this bound")
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(args, out, err)
        handler = {
            "keygen": cmd_keygen,
            "encrypt": cmd_encrypt,
            "decrypt": cmd_decrypt,
            "pow": cmd_pow,
            "redei": cmd_redei,
            "bench": cmd_bench,
        }[args.command]
        handler(args, out)
        return 0
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except rsa.FactorFound as exc:
        err.write(f"error: {exc}\nfactor of N found: {exc.factor}\n")
        return 1
    except NonInvertible as exc:
        err.write(f"error: {exc}\n")
        if exc.reveals_factor:
            err.write(f"factor of N found: {exc.gcd}\n")
        return 1
    except (ArithmeticError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
