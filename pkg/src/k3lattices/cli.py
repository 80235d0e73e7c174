"""Command-line front end.

Exit codes are a stable contract: 0 success, 1 claim failure, 2 usage or
input error, 3 budget exceeded.  Identical invocations with identical
seeds produce byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import catalog, verify
from .discform import discriminant_form, milgram_signature, min_generators
from .errors import (
    BudgetExceededError,
    LatticeError,
    SignatureObstructionError,
)
from .embed import find_primitive_embedding
from .isometry import automorphism_group
from .jsonio import (
    dumps,
    embedding_from_obj,
    embedding_to_obj,
    encode_int,
    fqf_to_obj,
    lattice_from_obj,
    lattice_to_obj,
    matrix_to_obj,
    report_to_obj,
)
from .lattice import (
    GramLattice,
    embedding_index,
    orthogonal_complement,
    saturation,
)
from .verify import (
    Budgets,
    CERTIFIED,
    FAIL,
    VerificationReport,
    criterion_unique_primitive_embedding,
    fm_partner_count,
    verify_kummer_example,
    verify_todorov_theorem,
)

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _lattice_summary(l: GramLattice) -> dict:
    sig = l.signature()
    fqf = discriminant_form(l) if l.is_even() else None
    out = lattice_to_obj(l)
    out["rank"] = l.rank
    out["determinant"] = encode_int(l.det)
    out["signature"] = [sig.positive, sig.negative]
    out["even"] = l.is_even()
    if fqf is not None:
        out["disc_order"] = encode_int(fqf.order)
    return out


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _budgets(args: argparse.Namespace) -> Budgets:
    return Budgets(
        node_budget=args.node_budget,
        disc_bound=args.disc_bound,
        embed_bound=args.embed_bound,
        seed=args.seed,
    )


def cmd_construct(args: argparse.Namespace) -> int:
    if args.todorov is not None:
        try:
            alpha_s, k_s = args.todorov.split(",")
            alpha, k = int(alpha_s), int(k_s)
        except ValueError:
            print(f"bad pair syntax: {args.todorov!r}", file=sys.stderr)
            return EXIT_USAGE
        if args.code is not None:
            code = catalog.shipped_code(args.code) if "," not in args.code else ()
        else:
            code = None
        try:
            if code is None:
                code = catalog.default_code(alpha, k)
            spec = catalog.TodorovSpec(alpha, k, code)
            built = catalog.build_todorov_lattice(spec)
        except LatticeError as exc:
            print(f"cannot construct pair ({alpha},{k}): {exc}", file=sys.stderr)
            return EXIT_USAGE
        out = _lattice_summary(built.lattice)
        out["mu_sq"] = built.mu_sq
        out["lambda_sq"] = built.lambda_sq
        sys.stdout.write(dumps(out))
        return EXIT_OK
    if args.gram is not None:
        try:
            lat = lattice_from_obj(_load_json(args.gram))
        except (OSError, ValueError, KeyError, LatticeError) as exc:
            print(f"cannot read lattice file: {exc}", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(dumps(_lattice_summary(lat)))
        return EXIT_OK
    if args.name is None:
        print("nothing to construct; give a name, --todorov or --gram", file=sys.stderr)
        return EXIT_USAGE
    try:
        lat = catalog.standard_lattice(args.name)
    except LatticeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(dumps(_lattice_summary(lat)))
    return EXIT_OK


def _rho_criterion_cases() -> list[GramLattice]:
    """Synthetic family of even lattices of signature (2, rank-2), rank <= 10."""
    u = catalog.standard_lattice("U")
    cases = []
    from .lattice import direct_sum

    for extra in range(0, 7):
        for scale in (2, 4):
            if 4 + extra > 10:
                continue
            base = direct_sum(u, u)
            tail = (
                catalog.diag_lattice([-scale] * extra) if extra else None
            )
            lat = direct_sum(base, tail) if tail is not None else base
            cases.append(lat)
    seen = set()
    out = []
    for lat in cases:
        if lat.gram.entries not in seen:
            seen.add(lat.gram.entries)
            out.append(lat)
    for n in (2, 4, 6, 8, 10, 12, 14, 16):
        out.append(
            direct_sum(
                direct_sum(u, GramLattice([[0, n], [n, 0]])),
                catalog.diag_lattice([-2, -2]),
            )
        )
    return out


def _paper_reports(axioms: bool, budgets: Budgets) -> list[VerificationReport]:
    from .verify import ComputedValue, INCONCLUSIVE, PASS

    reports: list[VerificationReport] = []

    pairs = catalog.admissible_todorov_pairs()
    expected_pairs = [
        (0, 9), (0, 10), (0, 11), (1, 10), (1, 11), (1, 12),
        (2, 12), (2, 13), (3, 14), (4, 15),
    ]
    reports.append(
        VerificationReport(
            claim_id="admissible-pairs",
            claim_text="the admissible double-point pairs are exactly the ten listed",
            verdict=PASS if pairs == expected_pairs else FAIL,
            computed_values=(
                ComputedValue("pairs", pairs, "admissible_todorov_pairs"),
                ComputedValue("count", len(pairs), "admissible_todorov_pairs"),
            ),
        )
    )

    for (alpha, k), det_expected, sig_expected in (
        ((0, 9), -256, (1, 9)),
        ((0, 10), 1024, (1, 10)),
    ):
        spec = catalog.TodorovSpec(alpha, k, ())
        built = catalog.build_todorov_lattice(spec)
        fqf = discriminant_form(built.lattice)
        sig = built.lattice.signature()
        ok = (
            built.lattice.rank == k + 1
            and built.lattice.det == det_expected
            and sig.as_tuple() == sig_expected
            and fqf.order == abs(det_expected)
            and built.mu_sq == -4
            and built.lattice.is_even()
        )
        reports.append(
            VerificationReport(
                claim_id=f"todorov-{alpha}-{k}-invariants",
                claim_text=(
                    f"the type-({alpha},{k}) Todorov lattice has rank {k + 1}, "
                    f"determinant {det_expected}, signature {sig_expected}, "
                    f"discriminant order {abs(det_expected)} and glue square -4"
                ),
                verdict=PASS if ok else FAIL,
                computed_values=(
                    ComputedValue("rank", built.lattice.rank, "GramLattice.rank"),
                    ComputedValue("determinant", built.lattice.det, "determinant"),
                    ComputedValue("signature", sig.as_tuple(), "signature"),
                    ComputedValue("disc_order", fqf.order, "discriminant_form"),
                    ComputedValue("mu_sq", built.mu_sq, "build_todorov_lattice"),
                    ComputedValue("lambda_sq", built.lambda_sq, "build_todorov_lattice"),
                ),
            )
        )

    kummer = verify_kummer_example(budgets)
    reports.append(kummer)

    reports.append(verify_todorov_theorem(catalog.TodorovSpec(0, 9, ()), axioms, budgets))
    reports.append(verify_todorov_theorem(catalog.TodorovSpec(0, 10, ()), axioms, budgets))

    cases = _rho_criterion_cases()
    verdicts = [criterion_unique_primitive_embedding(lat) for lat in cases]
    all_certified = all(v.status == CERTIFIED for v in verdicts)
    reports.append(
        VerificationReport(
            claim_id="unique-embedding-small-rank",
            claim_text=(
                "for every test lattice of signature (2, rank-2) with rank <= 10 "
                "the primitive embedding into the K3 lattice is unique"
            ),
            verdict=PASS if all_certified and len(cases) >= 20 else FAIL,
            computed_values=(
                ComputedValue("cases", len(cases), "criterion_unique_primitive_embedding"),
                ComputedValue(
                    "all_certified", all_certified, "criterion_unique_primitive_embedding"
                ),
                ComputedValue(
                    "min_margin",
                    min(v.margin for v in verdicts),
                    "criterion_unique_primitive_embedding",
                ),
            ),
        )
    )

    numerics = catalog.sheaf_numerics(2, 8, 4)
    self_pairing = catalog.mukai_pairing(numerics.vector, numerics.vector)
    ok = (
        numerics.vector.v0 == 2
        and numerics.vector.v2 == 2
        and self_pairing == 0
        and numerics.moduli_dim == 2
        and numerics.euler == 4
    )
    reports.append(
        VerificationReport(
            claim_id="net-of-quadrics-numerics",
            claim_text=(
                "rank-2 sheaves with degree-8 determinant and c2 = 4 have vector "
                "(2,H,2), self-pairing 0, Euler characteristic 4 and a "
                "2-dimensional moduli space"
            ),
            verdict=PASS if ok else FAIL,
            computed_values=(
                ComputedValue("v0", numerics.vector.v0, "sheaf_numerics"),
                ComputedValue("v2", numerics.vector.v2, "sheaf_numerics"),
                ComputedValue("self_pairing", self_pairing, "mukai_pairing"),
                ComputedValue("euler", numerics.euler, "sheaf_numerics"),
                ComputedValue("moduli_dim", numerics.moduli_dim, "sheaf_numerics"),
            ),
        )
    )

    g8 = catalog.polarization_genus(8)
    g2 = catalog.polarization_genus(2)
    reports.append(
        VerificationReport(
            claim_id="polarization-genus-pairs",
            claim_text="degree 8 gives genus 5 and degree 2 gives genus 2",
            verdict=PASS if (g8, g2) == (5, 2) else FAIL,
            computed_values=(
                ComputedValue("genus_of_degree_8", g8, "polarization_genus"),
                ComputedValue("genus_of_degree_2", g2, "polarization_genus"),
            ),
        )
    )

    deg = catalog.discriminant_hypersurface_degree(5)
    reports.append(
        VerificationReport(
            claim_id="singular-quadrics-degree",
            claim_text="singular quadrics in P^5 form a degree-6 hypersurface",
            verdict=PASS if deg == 6 else FAIL,
            computed_values=(
                ComputedValue("degree", deg, "discriminant_hypersurface_degree"),
            ),
        )
    )
    return reports


def cmd_verify_paper(args: argparse.Namespace) -> int:
    budgets = _budgets(args)
    axioms = args.axioms == "on"
    reports = _paper_reports(axioms, budgets)
    summary = {"pass": 0, "fail": 0, "certified-via-assumption": 0, "inconclusive": 0}
    for r in reports:
        summary[r.verdict] = summary.get(r.verdict, 0) + 1
    payload = {
        "config": {
            "axioms": "on" if axioms else "off",
            "seed": budgets.seed,
            "node_budget": budgets.node_budget,
            "disc_bound": budgets.disc_bound,
            "embed_bound": budgets.embed_bound,
        },
        "claims": [report_to_obj(r) for r in reports],
        "summary": summary,
    }
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        width = max(len(r.claim_id) for r in reports)
        print(f"axioms={payload['config']['axioms']} seed={budgets.seed}")
        for r in reports:
            markers = f"  [{'; '.join(r.markers)}]" if r.markers else ""
            print(f"{r.claim_id:<{width}}  {r.verdict:<26}{markers}")
        print(
            "summary: "
            + ", ".join(f"{k}={v}" for k, v in sorted(summary.items()) if v)
        )
    return EXIT_CLAIM_FAILED if summary.get("fail") else EXIT_OK


def cmd_compute(args: argparse.Namespace) -> int:
    budgets = _budgets(args)
    try:
        if args.task == "disc":
            lat = lattice_from_obj(_load_json(args.infile))
            fqf = discriminant_form(lat)
            out = fqf_to_obj(fqf)
            out["order"] = encode_int(fqf.order)
            out["min_generators"] = min_generators(fqf)
            if fqf.order <= budgets.disc_bound:
                out["gauss_residue"] = milgram_signature(fqf, budgets.disc_bound)
            sys.stdout.write(dumps(out))
            return EXIT_OK
        if args.task == "saturate":
            emb = embedding_from_obj(_load_json(args.infile))
            sat = saturation(emb)
            out = embedding_to_obj(sat)
            out["index"] = encode_int(embedding_index(emb))
            sys.stdout.write(dumps(out))
            return EXIT_OK
        if args.task == "complement":
            emb = embedding_from_obj(_load_json(args.infile))
            comp = orthogonal_complement(emb)
            out = embedding_to_obj(comp)
            out["rank"] = comp.rank
            out["gram"] = matrix_to_obj(comp.gram())
            sys.stdout.write(dumps(out))
            return EXIT_OK
        if args.task == "aut":
            lat = lattice_from_obj(_load_json(args.infile))
            try:
                group = automorphism_group(lat, node_budget=budgets.node_budget)
            except BudgetExceededError as exc:
                sys.stdout.write(dumps(_lattice_summary(lat)))
                print(f"budget exceeded: {exc}", file=sys.stderr)
                return EXIT_BUDGET
            out = {
                "order": encode_int(group.order),
                "generators": [matrix_to_obj(g.matrix) for g in group.generators],
            }
            sys.stdout.write(dumps(out))
            return EXIT_OK
        if args.task == "embed":
            sub = lattice_from_obj(_load_json(args.sub))
            amb = lattice_from_obj(_load_json(args.amb))
            try:
                emb = find_primitive_embedding(
                    sub,
                    amb,
                    node_budget=budgets.node_budget,
                    coeff_bound=budgets.embed_bound,
                )
            except SignatureObstructionError as exc:
                sys.stdout.write(dumps({"found": False, "reason": "signature-obstruction"}))
                print(str(exc), file=sys.stderr)
                return EXIT_OK
            if emb is None:
                sys.stdout.write(dumps({"found": False, "reason": "budget"}))
                return EXIT_BUDGET
            comp = orthogonal_complement(emb)
            comp_lat = GramLattice(comp.gram())
            out = embedding_to_obj(emb)
            out["found"] = True
            out["complement"] = _lattice_summary(comp_lat)
            sys.stdout.write(dumps(out))
            return EXIT_OK
        if args.task == "fm-count":
            classes: object
            if args.classes == "certified-one":
                classes = verify.CERTIFIED_ONE
            else:
                classes = int(args.classes)
            verdicts = [v.strip() for v in args.verdicts.split(",") if v.strip()]
            count = fm_partner_count(classes, verdicts)
            out = {
                "lower": count.lower,
                "upper": count.upper,
                "exact": count.exact,
                "inconclusive": count.inconclusive,
            }
            sys.stdout.write(dumps(out))
            return EXIT_OK
    except (OSError, ValueError, KeyError, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"unknown task {args.task!r}", file=sys.stderr)
    return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3lat",
        description="Exact lattice arithmetic and verification for K3 surface theory.",
    )
    parser.add_argument("--seed", type=int, default=0, help="search seed (default 0)")
    parser.add_argument(
        "--node-budget", type=int, default=Budgets().node_budget,
        help="backtracking node budget",
    )
    parser.add_argument(
        "--disc-bound", type=int, default=Budgets().disc_bound,
        help="largest discriminant-group order enumerated",
    )
    parser.add_argument(
        "--embed-bound", type=int, default=Budgets().embed_bound,
        help="hyperbolic coefficient bound in the embedding search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="build a catalog lattice")
    p_construct.add_argument("name", nargs="?", help="catalog name, e.g. U or K3")
    p_construct.add_argument("--todorov", help="pair alpha,k")
    p_construct.add_argument("--code", help="shipped code name for alpha > 0")
    p_construct.add_argument("--gram", help="lattice JSON file")
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser("verify-paper", help="run the verification suite")
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--axioms", choices=("on", "off"), default="on")
    p_verify.set_defaults(func=cmd_verify_paper)

    p_compute = sub.add_parser("compute", help="run one lattice computation")
    p_compute.add_argument(
        "task", choices=("disc", "complement", "saturate", "aut", "embed", "fm-count")
    )
    p_compute.add_argument("--in", dest="infile", help="input JSON file")
    p_compute.add_argument("--sub", help="sublattice JSON file (embed)")
    p_compute.add_argument("--amb", help="ambient lattice JSON file (embed)")
    p_compute.add_argument("--classes", help="genus class count or certified-one")
    p_compute.add_argument("--verdicts", default="", help="per-class verdicts, comma separated")
    p_compute.set_defaults(func=cmd_compute)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
