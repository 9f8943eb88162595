"""Command-line interface.

Polynomials are written in x with +, -, *, / (by constants only), ^ or ** for
nonnegative integer powers, parentheses, and integer or a/b rational literals,
for example "3*(x^2-7)*(17*x^2-43)".
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from chatelet import corpus as corpus_mod
from chatelet.brauer import BrauerKind, classify
from chatelet.errors import ChateletError
from chatelet.galois import QuadField, galois_group
from chatelet.local import (
    ab_experiment,
    count_square_values,
    ev_image_at,
    norm_ratio_experiment,
)
from chatelet.padic import DEFAULT_PREC, Place
from chatelet.poly import parse_poly
from chatelet.surface import bad_places_split, new_surface, surface_from_dict
from chatelet.symbols import hilbert_symbol
from chatelet.verdict import VerdictKind, perpetual_classify, wa_decide

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2

GRAMMAR_HELP = """\
polynomial grammar:
  expr  := term (('+' | '-') term)*
  term  := unary (('*' | '/') unary)*      division only by nonzero constants
  unary := ('+' | '-') unary | power
  power := atom ('^' unary)?               '**' also accepted; exponent a constant integer >= 0
  atom  := integer | 'x' | '(' expr ')'
rationals are written a/b, e.g. --a -43/17
"""


def _analyze_dict(d: dict, depth: int) -> dict:
    s = surface_from_dict(d)
    report = wa_decide(s, depth)
    out = report.to_dict()
    out["perpetual"] = perpetual_classify(s).to_dict()
    if "name" in d:
        out["name"] = d["name"]
    return out


def cmd_analyze(args) -> int:
    s = new_surface(args.a, args.P)
    report = wa_decide(s, args.depth)
    perpetual = perpetual_classify(s)
    if args.json:
        out = report.to_dict()
        out["perpetual"] = perpetual.to_dict()
        print(json.dumps(out, indent=2))
    else:
        print(report.render())
        print(f"perpetual: {perpetual.classification} ({perpetual.detail})")
    return EXIT_INCONCLUSIVE if report.verdict.kind is VerdictKind.Inconclusive else EXIT_OK


def cmd_symbol(args) -> int:
    print(hilbert_symbol(args.a, args.b, Place.parse(args.place)))
    return EXIT_OK


def cmd_galois(args) -> int:
    f = parse_poly(args.P)
    base = QuadField(args.base) if args.base is not None else None
    print(galois_group(f, base))
    return EXIT_OK


def cmd_evimage(args) -> int:
    s = new_surface(args.a, args.P)
    brauer = classify(s)
    if brauer.kind is BrauerKind.Trivial:
        print("Br X / Br Q is trivial: every evaluation map is constant")
        return EXIT_OK
    place = Place.parse(args.place)
    rows = []
    undetermined = False
    for gen in brauer.generators:
        im = ev_image_at(s, gen, place, args.depth)
        undetermined |= not im.determined
        rows.append(
            {
                "generator": gen.name,
                "place": str(place),
                "image": [str(v) for v in im.sorted_values()],
                "determined": im.determined,
                "witness": im.witness_text(),
            }
        )
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for row in rows:
            print(f"{row['generator']} at {row['place']}: {{{', '.join(row['image'])}}}  [{row['witness']}]")
    return EXIT_INCONCLUSIVE if undetermined else EXIT_OK


def cmd_norms(args) -> int:
    print(f"{'n':>3} {'in':>8} {'out':>8} {'undecided':>10} {'lower':>10} {'upper':>10}")
    for n in range(args.n_min, args.n + 1):
        res = norm_ratio_experiment(args.a, args.r, n, args.p)
        lo, hi = res.bracket()
        print(f"{n:>3} {res.decided_in:>8} {res.decided_out:>8} {res.undecided:>10} {float(lo):>10.6f} {float(hi):>10.6f}")
    if args.lam is not None:
        ab = ab_experiment(args.a, args.lam, args.n)
        print(f"A, B experiment at depth {args.n} with lambda = {args.lam}:")
        for name in ("A", "B", "A_minus_B", "B_minus_A", "outside_both"):
            res = getattr(ab, name)
            lo, hi = res.bracket()
            print(f"  {name:<13} in={res.decided_in:<6} undecided={res.undecided:<4} density in [{float(lo):.4f}, {float(hi):.4f}]")
    return EXIT_OK


def cmd_squares(args) -> int:
    R = parse_poly(args.R)
    print(count_square_values(args.q, R))
    return EXIT_OK


def cmd_corpus(args) -> int:
    items = corpus_mod.load(args.path)
    worst = EXIT_OK
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        futures = [pool.submit(_analyze_dict, d, args.depth) for d in items]
        for d, fut in zip(items, futures):
            try:
                out = fut.result()
            except ChateletError as exc:
                out = {"name": d.get("name"), "error": str(exc)}
                worst = max(worst, EXIT_INPUT_ERROR)
            else:
                if out["verdict"] == str(VerdictKind.Inconclusive):
                    worst = max(worst, EXIT_INCONCLUSIVE)
            if args.json:
                print(json.dumps(out))
            else:
                print(f"{out.get('name', '')}: a={d['a']} P={d['P']} -> {out.get('verdict', out.get('error'))} {out.get('witnesses', '')}")
    return worst


def cmd_fuzz(args) -> int:
    """Compare the split-case criterion with direct evaluation images on random surfaces."""
    from chatelet.corpus import random_split_surface
    from chatelet.padic import REAL
    from chatelet.verdict import wa_split

    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.count):
        s = random_split_surface(rng)
        witnesses = set(wa_split(s).verdict.witnesses)
        brauer = classify(s)
        for place in [REAL] + [Place(b.prime) for b in bad_places_split(s)]:
            images = [ev_image_at(s, g, place, args.depth) for g in brauer.generators]
            full = any(im.is_full() for im in images)
            if full != (place in witnesses):
                failures += 1
                print(f"discrepancy: a={s.a} P={s.P.to_expr()} place={place}")
    print(f"{args.count} surfaces, {failures} discrepancies")
    return EXIT_OK if failures == 0 else EXIT_INCONCLUSIVE


# argparse only recognizes integers and decimals as negative numbers; without this a
# rational such as -43/17 would be taken for an option flag
_NEGATIVE_NUMBER = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chatelet",
        description="Brauer-Manin analysis of Chatelet surfaces y^2 - a z^2 = P(x) over Q.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def surface_args(p):
        p.add_argument("--a", required=True, help="the nonsquare rational a")
        p.add_argument("--P", required=True, help="the polynomial P(x) of degree 3 or 4")
        p.add_argument("--depth", type=int, default=DEFAULT_PREC, help="residue-disc depth (default %(default)s)")
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("analyze", help="full weak-approximation report", epilog=GRAMMAR_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    surface_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("symbol", help="local Hilbert symbol (a, b) at a place, as 0 or 1/2")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("place", help="a prime, or 'real'")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("galois", help="Galois group of a cubic or quartic")
    p.add_argument("P")
    p.add_argument("--base", help="work over Q(sqrt base) instead of Q")
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("evimage", help="evaluation-map image at one place")
    surface_args(p)
    p.add_argument("--place", required=True, help="a prime, or 'real'")
    p.set_defaults(func=cmd_evimage)

    p = sub.add_parser("norms", help="norm-density experiments at a ramified prime")
    p.add_argument("--a", required=True)
    p.add_argument("--r", type=int, default=1, help="residue class mod p")
    p.add_argument("--n", type=int, default=12, help="largest depth")
    p.add_argument("--n-min", type=int, default=1, help="smallest depth")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--lam", help="also run the A/B experiment with this lambda")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("squares", help="count square values of an irreducible quadratic over F_q")
    p.add_argument("q", type=int)
    p.add_argument("R", help="monic quadratic, e.g. x^2+1")
    p.set_defaults(func=cmd_squares)

    p = sub.add_parser("corpus", help="analyze a JSON array of surfaces, one report per line")
    p.add_argument("path", nargs="?", help="corpus file (default: the bundled corpus)")
    p.add_argument("--depth", type=int, default=DEFAULT_PREC)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("fuzz", help="cross-check the split-case criterion on random surfaces")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--depth", type=int, default=DEFAULT_PREC)
    p.set_defaults(func=cmd_fuzz)
    for p in [parser, *sub.choices.values()]:
        p._negative_number_matcher = _NEGATIVE_NUMBER
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChateletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
