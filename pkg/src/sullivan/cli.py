"""Command-line interface.

    sullivan betti model.txt
    sullivan certify fibre.txt total.txt
    sullivan corpus 'odd-free-*'

Exit codes: 0 success, 1 assertion or corpus mismatch, 2 input error,
3 resource cap hit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .cohomology import DEFAULT_CAP, ResourceCapError, betti_table, poincare_duality_check
from .model import ContractError, ParseError, check_differential, format_model, load_model
from .purity import PurityError, associated_pure, is_elliptic, is_pure
from .random_models import InadmissibleParams, random_two_stage
from .rank import (
    ExtensionSpec,
    construct_lemma_extension,
    extension_summary,
    rank_bounds,
    search_lower_bound,
    verify_extension,
)
from .structure import (
    NonQuadraticError,
    NotTwoStageError,
    gottlieb,
    hypothesis_check,
    maximality,
    quadratic_block_matrix,
    two_stage_split,
    wang,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class Output:
    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def lines(self, lines) -> None:
        for line in lines:
            if self.machine:
                key, eq, value = line.partition(" = ")
                line = f"{key}={value}" if eq else line
            print(line, file=self.stream)

    def text(self, text: str) -> None:
        """Free-form output (model files); suppressed in machine mode."""
        if not self.machine:
            print(text.rstrip("\n"), file=self.stream)


def cmd_check(args, out):
    rep = check_differential(load_model(args.model))
    out.lines(rep.lines())
    for name, val in rep.d_squared.items():
        out.lines([f"d^2({name}) = {val}"])
    for name, val in rep.linear_terms.items():
        out.lines([f"linear_term({name}) = {val}"])
    return EXIT_OK if rep.d_squared_zero else EXIT_MISMATCH


def cmd_betti(args, out):
    model = load_model(args.model)
    ell = is_elliptic(model, witnesses=False)
    if args.max_degree is None and not ell.elliptic:
        raise ContractError("model is not elliptic; pass --max-degree for a truncated table")
    table = betti_table(model, args.max_degree, elliptic=ell, cap=args.cap)
    out.lines(table.lines())
    if ell.elliptic:
        dual = poincare_duality_check(model, ell, table, cap=args.cap)
        out.lines([f"formal_dimension = {dual.formal_dimension}",
                   f"duality = {str(dual.holds).lower()}"])
    return EXIT_OK


def cmd_pure(args, out):
    model = load_model(args.model)
    out.lines([f"pure = {str(is_pure(model)).lower()}"])
    out.text(format_model(associated_pure(model)))
    return EXIT_OK


def cmd_elliptic(args, out):
    model = load_model(args.model)
    rep = is_elliptic(model)
    out.lines([f"pure_ideal = ({', '.join(rep.ideal.format()) or '0'})"])
    out.lines(rep.lines())
    gb = rep.groebner_basis
    out.lines([f"groebner[{k}] = {gb.format_poly(g)}" for k, g in enumerate(gb.polys)])
    if not args.machine:
        for w in rep.witness.values():
            out.text("certificate: " + w.format(rep.ideal))
    return EXIT_OK


def cmd_split(args, out):
    out.lines(two_stage_split(load_model(args.model)).lines())
    return EXIT_OK


def cmd_maximalize(args, out):
    model = load_model(args.model)
    ma = maximality(model)
    out.lines(ma.lines())
    table = model.table
    for vec in ma.K_basis:
        out.lines(["K = " + " + ".join(f"({c})*{table[u].name}*" for u, c in sorted(vec.items()))])
    if ma.repair is not None:
        for g in table:
            out.lines([f"phi({g.name}) = {ma.repair.values[g.id]}"])
        out.lines(ma.repaired.lines())
        out.text(format_model(ma.repaired.model))
    return EXIT_OK


def cmd_matrix(args, out):
    out.lines(quadratic_block_matrix(load_model(args.model)).lines())
    return EXIT_OK


def cmd_hypotheses(args, out):
    out.lines(hypothesis_check(load_model(args.model)).lines())
    return EXIT_OK


def cmd_gottlieb(args, out):
    out.lines(gottlieb(load_model(args.model)).lines())
    return EXIT_OK


def cmd_wang(args, out):
    data = wang(load_model(args.model), args.generator, cap=args.cap)
    out.lines(data.lines())
    return EXIT_OK if data.exact is not False else EXIT_MISMATCH


def cmd_bounds(args, out):
    model = load_model(args.model)
    certs = [verify_extension(ExtensionSpec(model, load_model(p))) for p in args.extension]
    for path, cert in zip(args.extension, certs):
        if not cert.valid:
            out.lines([f"rejected = {path}"] + cert.lines())
    rb = rank_bounds(model, certs, budget=args.budget, annotations=args.note, cap=args.cap)
    out.lines(rb.lines())
    return EXIT_OK if rb.consistent and rb.trc_holds else EXIT_MISMATCH


def cmd_certify(args, out):
    model = load_model(args.model)
    if args.total:
        spec = ExtensionSpec(model, load_model(args.total))
    elif args.lemma is not None:
        names = [n for n in args.lemma.split(",") if n]
        spec = construct_lemma_extension(model, None, names)
    else:
        res = search_lower_bound(model, budget=args.budget)
        out.lines([f"search.tried = {res.tried}", f"search.partial = {str(res.partial).lower()}",
                   f"search.defect = {str(res.defect).lower()}"])
        spec = res.certificate.spec
    cert = verify_extension(spec)
    out.lines(extension_summary(cert))
    if args.write:
        Path(args.write).write_text(spec.to_text())
    elif not args.total:
        out.text(spec.to_text())
    return EXIT_OK if cert.valid else EXIT_MISMATCH


def cmd_corpus(args, out):
    report = corpus_mod.run_corpus(args.pattern, args.manifest or corpus_mod.MANIFEST, cap=args.cap)
    out.lines(report.lines())
    return report.exit_code


def cmd_random(args, out):
    lo, _, hi = args.degrees.partition(":")
    model = random_two_stage(args.seed, args.p, args.r, (int(lo), int(hi or lo)),
                             full_rank=not args.any_rank)
    print(format_model(model), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None,
                        help="truncate degree-wise computations at this degree")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="maximum cumulative basis size (default %(default)s)")
    common.add_argument("--machine", action="store_true", help="key=value output only")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")

    ap = argparse.ArgumentParser(prog="sullivan", description="Rational homotopy computations "
                                 "on finite Sullivan models.")
    sub = ap.add_subparsers(dest="command", required=True)

    def verb(name, fn, help_, model=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if model:
            p.add_argument("model", help="model file")
        p.set_defaults(func=fn)
        return p

    verb("check", cmd_check, "d^2 = 0, minimality and nilpotence")
    verb("betti", cmd_betti, "Betti numbers and Poincare duality")
    verb("pure", cmd_pure, "associated pure model")
    verb("elliptic", cmd_elliptic, "ellipticity via the pure ideal")
    verb("split", cmd_split, "two-stage decomposition")
    verb("maximalize", cmd_maximalize, "maximal-V test and basis repair")
    verb("matrix", cmd_matrix, "skew block matrix of a quadratic two-stage model")
    verb("hypotheses", cmd_hypotheses, "connectivity hypotheses for the rank bounds")
    verb("gottlieb", cmd_gottlieb, "rational Gottlieb group dimensions")
    p = verb("wang", cmd_wang, "Wang derivation over an odd cocycle generator")
    p.add_argument("generator")
    p = verb("bounds", cmd_bounds, "rank bounds and toral rank inequality")
    p.add_argument("--extension", action="append", default=[], help="total model of an extension")
    p.add_argument("--note", action="append", default=[], help="annotation to attach")
    p.add_argument("--budget", type=int, default=4096, help="extension search budget")
    p = verb("certify", cmd_certify, "verify, construct or search for an extension")
    g = p.add_mutually_exclusive_group()
    g.add_argument("total", nargs="?", help="total model of the extension to verify")
    g.add_argument("--lemma", help="comma-separated odd generators to perturb")
    p.add_argument("--budget", type=int, default=4096, help="search budget")
    p.add_argument("--write", help="write the extension model to this path")
    p = verb("corpus", cmd_corpus, "run the example corpus", model=False)
    p.add_argument("pattern", nargs="?", default="*", help="entry name glob")
    p.add_argument("--manifest", help="alternative manifest file")
    p = verb("random", cmd_random, "random odd quadratic two-stage model", model=False)
    p.add_argument("--p", type=int, default=3, help="dim U")
    p.add_argument("--r", type=int, default=2, help="dim V")
    p.add_argument("--degrees", default="3:3", help="odd degree range for U, lo:hi")
    p.add_argument("--any-rank", action="store_true", help="do not force maximal V")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.machine)
    try:
        return args.func(args, out)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ContractError, NotTwoStageError, NonQuadraticError, PurityError,
            InadmissibleParams, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
