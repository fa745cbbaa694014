"""The homlab experiment runner.

Subcommands: homog, gardiner, schlafli, spectrum, fraisse, rado, sumfree
(census / random / gamma / henson), reducts, switch, rigid, run.  Every run
prints a JSON report (config echo, verdicts, version, timing) to stdout;
--emit writes the delimited artifact (g6 / CSV / JSON) to a file, and CSV
emissions render a companion matplotlib figure next to the file unless
--no-plot is given.  A false verdict is still a successful run: the exit
code is nonzero only for usage or parse errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time

from . import __version__
from .core import automorphisms
from .errors import HomlabError, WitnessNotFound
from .graphio import (
    ParseError,
    emit_edge_list,
    emit_graph6,
    emit_structure_json,
    load_graph,
    parse_structure_json,
)
from .reporting import build_report, report_to_json, rows_to_csv

DEFAULT_SEED = 20250811


def _read_input(value):
    if value == "-":
        return sys.stdin.read()
    if os.path.exists(value):
        with open(value) as fh:
            return fh.read()
    return value


def _load_graph_arg(value, fmt=None):
    return load_graph(_read_input(value), fmt=fmt)


def _emit(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _witness_json(witness):
    if witness is None:
        return None
    from .reporting import jsonable

    return jsonable(witness)


# --- subcommand implementations ---------------------------------------------


def cmd_homog(args):
    from .homogeneity import is_homogeneous, is_t_homogeneous

    g = _load_graph_arg(args.input)
    if args.t is not None:
        ok, witness = is_t_homogeneous(g, args.t)
        return {
            "n": g.n,
            "t": args.t,
            "t_homogeneous": ok,
            "witness": _witness_json(witness.pairs if witness else None),
        }
    ok, witness = is_homogeneous(g)
    return {
        "n": g.n,
        "homogeneous": ok,
        "witness": _witness_json(witness.pairs if witness else None),
    }


def cmd_gardiner(args):
    from .homogeneity import gardiner_classify

    g = _load_graph_arg(args.input)
    verdict = gardiner_classify(g)
    return {
        "n": g.n,
        "family": verdict.family,
        "params": _witness_json(verdict.params),
        "witness": _witness_json(verdict.witness),
    }


def cmd_schlafli(args):
    from .homogeneity import schlafli_graph, schlafli_vertex_names

    g = schlafli_graph()
    payload = {
        "n": g.n,
        "regular_degree": g.degree(0),
        "vertex_names": schlafli_vertex_names(),
        "graph6": emit_graph6(g),
    }
    if args.emit:
        if args.format == "edges":
            _emit(args.emit, emit_edge_list(g))
        else:
            _emit(args.emit, emit_graph6(g) + "\n")
        payload["emitted"] = args.emit
    return payload


def cmd_spectrum(args):
    from .homogeneity import is_t_tuple_regular, spectral_signature

    if args.explore_t3:
        from .enumeration import all_graphs_up_to

        groups = {}
        for g in all_graphs_up_to(args.max_n):
            sig = spectral_signature(g).coefficients
            groups.setdefault((g.n, sig), []).append(g)
        candidates = []
        for (n, sig), bucket in sorted(groups.items()):
            if len(bucket) < 2 or n < 3:
                continue
            verdicts = [is_t_tuple_regular(g, 3).holds for g in bucket]
            if len(set(verdicts)) > 1:
                candidates.append(
                    {
                        "n": n,
                        "charpoly": list(sig),
                        "graphs6": [emit_graph6(g) for g in bucket],
                        "t3_regular": verdicts,
                    }
                )
        return {
            "explored_up_to": args.max_n,
            "cospectral_groups_with_t3_disagreement": candidates,
            "note": "exploratory output; no pass/fail semantics",
        }
    g = _load_graph_arg(args.input)
    sig = spectral_signature(g)
    payload = {"n": g.n, "charpoly": list(sig.coefficients)}
    if args.emit:
        rows = [(i, c) for i, c in enumerate(sig.coefficients)]
        _emit(args.emit, rows_to_csv(("power_drop", "coefficient"), rows))
        payload["emitted"] = args.emit
        if not args.no_plot:
            import numpy as np

            from .plotting import render_spectrum

            eigs = np.roots(np.array(sig.coefficients, dtype=float))
            payload["figure"] = render_spectrum(
                [float(e.real) for e in eigs], args.emit, f"spectrum (n={g.n})"
            )
    return payload


def cmd_fraisse(args):
    from .fraisse import check_ap, check_hereditary, check_jep, class_by_name
    from .reporting import jsonable

    cls = class_by_name(args.klass)
    if args.check == "hereditary":
        ok, witness = check_hereditary(cls, args.n)
        witness_doc = None
        if witness:
            member, verts, sub = witness
            witness_doc = {
                "member": json.loads(emit_structure_json(member)),
                "vertices": list(verts),
                "substructure": json.loads(emit_structure_json(sub)),
            }
        return {"class": cls.name, "check": "hereditary", "n": args.n, "holds": ok, "witness": witness_doc}
    if args.check == "jep":
        ok, witness = check_jep(cls, args.n)
        witness_doc = None
        if witness:
            witness_doc = {
                "a": json.loads(emit_structure_json(witness[0])),
                "b": json.loads(emit_structure_json(witness[1])),
            }
        return {"class": cls.name, "check": "jep", "n": args.n, "holds": ok, "witness": witness_doc}
    ok, witness = check_ap(cls, args.n, strong=args.strong)
    witness_doc = None
    if witness:
        witness_doc = {
            "base": json.loads(emit_structure_json(witness.base)),
            "b1": json.loads(emit_structure_json(witness.b1)),
            "b2": json.loads(emit_structure_json(witness.b2)),
            "verdict": jsonable(witness.verdict),
        }
    return {
        "class": cls.name,
        "check": "strong-ap" if args.strong else "ap",
        "n": args.n,
        "holds": ok,
        "witness": witness_doc,
    }


def _oracle_by_name(name):
    from .rado import BitOracle, PrimeOracle

    if name == "bit":
        return BitOracle()
    if name == "prime":
        return PrimeOracle()
    raise ParseError(f"unknown oracle {name!r}")


def cmd_rado(args):
    from .rado import (
        ExtensionQuery,
        back_and_forth,
        extension_witness,
        prime_graph_adjacent,
        verify_partial_isomorphism,
    )

    if args.back_and_forth:
        a = _oracle_by_name(args.back_and_forth[0])
        b = _oracle_by_name(args.back_and_forth[1])
        try:
            phi = back_and_forth(a, b, args.steps, args.bound)
            outcome = "completed"
        except WitnessNotFound as err:
            phi = err.partial
            outcome = "witness-not-found"
        verified = verify_partial_isomorphism(phi, a, b)
        payload = {
            "oracles": list(args.back_and_forth),
            "steps_requested": args.steps,
            "bound": args.bound,
            "outcome": outcome,
            "pairs": [list(p) for p in phi.pairs],
            "map_size": len(phi.pairs),
            "verified": verified,
        }
        if args.emit:
            _emit(args.emit, json.dumps({"pairs": payload["pairs"]}, sort_keys=True))
            payload["emitted"] = args.emit
        return payload
    if args.check == "extension":
        oracle = _oracle_by_name(args.oracle)
        window = list(itertools.islice(oracle.vertices(), args.max_uv))
        bound = args.bound or (1 << (args.max_uv + 1))
        missing = []
        found = 0
        for assignment in itertools.product((0, 1, 2), repeat=len(window)):
            targets = frozenset(v for v, a in zip(window, assignment) if a == 1)
            avoid = frozenset(v for v, a in zip(window, assignment) if a == 2)
            z = extension_witness(oracle, ExtensionQuery(targets, avoid, bound))
            if z is None:
                missing.append([sorted(targets), sorted(avoid)])
            else:
                found += 1
        return {
            "oracle": oracle.tag,
            "check": "extension",
            "window": window,
            "patterns": 3 ** len(window),
            "found": found,
            "missing": missing,
            "all_found": not missing,
        }
    if args.check == "reciprocity":
        from .numtheory import primes_in_class

        bound = args.bound or 10**4
        ps = []
        for p in primes_in_class(1, 4):
            if p >= bound:
                break
            ps.append(p)
        asymmetric = []
        for p, q in itertools.combinations(ps, 2):
            if prime_graph_adjacent(p, q) != prime_graph_adjacent(q, p):
                asymmetric.append([p, q])
        return {
            "check": "reciprocity",
            "primes_below": args.bound,
            "prime_count": len(ps),
            "pairs_checked": len(ps) * (len(ps) - 1) // 2,
            "asymmetric_pairs": asymmetric,
            "symmetric": not asymmetric,
        }
    if args.check == "common-neighbour":
        from .rado import common_neighbour_check

        oracle = _oracle_by_name(args.oracle)
        report = common_neighbour_check(
            oracle, args.max_uv, args.window, args.bound or (1 << 12)
        )
        return {
            "oracle": oracle.tag,
            "check": "common-neighbour",
            "window": list(report.window),
            "all_found": report.all_found,
            "missing": [list(s) for s, w in report.results if w is None],
        }
    raise ParseError("rado needs --check or --back-and-forth")


def cmd_sumfree(args):
    from .sumfree import (
        SumFreeSet,
        census,
        circulant_window,
        density_experiment,
        greedy_gap_universal,
        henson_window_check,
        is_sum_free,
    )

    if args.mode == "census":
        if args.sweep:
            rows = []
            for n in range(1, args.n + 1):
                c = census(n)
                rows.append((n, c.total, c.ratio))
            payload = {
                "sweep_to": args.n,
                "rows": [[n, t, r] for n, t, r in rows],
            }
            if args.emit:
                _emit(args.emit, rows_to_csv(("n", "total", "ratio"), rows))
                payload["emitted"] = args.emit
                if not args.no_plot:
                    from .plotting import render_series

                    payload["figure"] = render_series(
                        [(n, t) for n, t, _ in rows],
                        args.emit,
                        "sum-free subset counts",
                        "n",
                        "count",
                        logy=True,
                    )
            return payload
        c = census(args.n)
        return {
            "n": c.n,
            "total": c.total,
            "odd_type": c.odd_type,
            "top_type": c.top_type,
            "both_type": c.both_type,
            "other": c.other,
            "ratio": c.ratio,
            "ratio_squared": {
                "numerator": c.ratio_squared.numerator,
                "denominator": c.ratio_squared.denominator,
            },
        }
    if args.mode == "random":
        summary = density_experiment(
            args.trials,
            args.N,
            seed=args.seed,
            bin_width=args.bin_width,
            workers=args.workers,
        )
        payload = {
            "trials": summary.trials,
            "N": summary.n_max,
            "seed": summary.seed,
            "p_no_evens": summary.p_no_evens,
            "no_evens_count": summary.no_evens_count,
            "mean_density": summary.mean_density,
            "mean_density_no_evens": summary.mean_density_no_evens,
            "mass_below_one_sixth": summary.mass_below_sixth,
        }
        if args.emit:
            _emit(
                args.emit,
                rows_to_csv(("bin_low", "bin_high", "count"), summary.histogram),
            )
            payload["emitted"] = args.emit
            if not args.no_plot:
                from .plotting import render_histogram

                payload["figure"] = render_histogram(
                    summary.histogram,
                    args.emit,
                    f"random sum-free densities (N={summary.n_max})",
                    vline=0.25,
                )
        return payload
    if args.mode == "gamma":
        elements = tuple(int(x) for x in args.set.split(","))
        ok, witness = is_sum_free(elements)
        s = SumFreeSet(tuple(sorted(elements)), max(elements))
        g = circulant_window(s, args.window)
        payload = {
            "set": sorted(elements),
            "sum_free": ok,
            "witness": list(witness) if witness else None,
            "window": args.window,
            "edges": len(g.edges()),
            "graph6": emit_graph6(g) if g.n <= 62 else None,
        }
        if args.emit:
            _emit(args.emit, emit_graph6(g) + "\n" if g.n <= 62 else emit_edge_list(g))
            payload["emitted"] = args.emit
        return payload
    if args.mode == "henson":
        if args.greedy:
            s = greedy_gap_universal(args.window, args.k, gap=args.gap)
        else:
            elements = tuple(sorted(int(x) for x in args.set.split(",")))
            s = SumFreeSet(elements, max(elements))
        bound = args.bound or s.horizon
        report = henson_window_check(s, args.k, args.window, bound)
        return {
            "k": report.k,
            "window": report.window,
            "bound_was_horizon": args.bound is None,
            "elements": len(s.elements),
            "checked": report.checked,
            "obstructions": [
                [list(u), list(v)] for u, v in report.obstructions[:50]
            ],
            "all_found": report.all_found,
        }
    raise ParseError("unknown sumfree mode")


def cmd_reducts(args):
    from .reducts import reduct_relation

    s = reduct_relation(args.n, args.kind)
    grp = automorphisms(s)
    payload = {
        "n": args.n,
        "kind": args.kind,
        "aut_order": grp.order,
        "structure": json.loads(emit_structure_json(s)),
    }
    if args.emit:
        _emit(args.emit, emit_structure_json(s) + "\n")
        payload["emitted"] = args.emit
    return payload


def cmd_switch(args):
    from .reducts import switch, switching_automorphism_witness

    g = _load_graph_arg(args.input)
    switch_set = set()
    if args.set:
        switch_set = {int(x) for x in args.set.split(",")}
    h = switch(g, switch_set)
    payload = {
        "n": g.n,
        "switch_set": sorted(switch_set),
        "graph6": emit_graph6(h),
    }
    if args.perm:
        perm = [int(x) for x in args.perm.split(",")]
        witness = switching_automorphism_witness(g, perm)
        payload["perm"] = perm
        payload["witness"] = sorted(witness) if witness is not None else None
    if args.emit:
        _emit(args.emit, emit_graph6(h) + "\n")
        payload["emitted"] = args.emit
    return payload


def _parse_tournament_doc(text):
    from .rigid import Tournament

    doc = json.loads(text)
    if "arcs" in doc:
        return Tournament(int(doc["n"]), frozenset(tuple(a) for a in doc["arcs"]))
    if "matrix" in doc:
        mat = doc["matrix"]
        n = len(mat)
        arcs = {
            (i, j) for i in range(n) for j in range(n) if i != j and mat[i][j]
        }
        return Tournament(n, frozenset(arcs))
    raise ParseError("tournament document needs 'arcs' or 'matrix'")


def cmd_rigid(args):
    from .reporting import jsonable
    from .rigid import (
        c_relation_of_tree,
        parse_tree,
        ramsey_failure_colouring,
        superpose,
    )

    if args.superpose:
        t = _parse_tournament_doc(_read_input(args.superpose[0]))
        tree = parse_tree(_read_input(args.superpose[1]).strip())
        s = superpose(t, c_relation_of_tree(tree))
        payload = {
            "n": s.n,
            "structure": json.loads(emit_structure_json(s)),
        }
        if args.check == "rigid":
            order = automorphisms(s).order
            payload["aut_order"] = order
            payload["rigid"] = order == 1
        if args.emit:
            _emit(args.emit, emit_structure_json(s) + "\n")
            payload["emitted"] = args.emit
        return payload
    if args.ramsey_failure:
        s = parse_structure_json(_read_input(args.ramsey_failure))
        order = [int(x) for x in args.order.split(",")]
        report = ramsey_failure_colouring(s, order)
        return {
            "n": s.n,
            "order": order,
            "colouring": jsonable(report.colouring),
            "cyclic_triples": jsonable(report.cyclic),
            "all_cyclic_bichromatic": report.all_cyclic_bichromatic,
        }
    if args.pattern:
        from .rigid import pattern_contains

        p = [int(x) for x in args.pattern[0].split(",")]
        q = [int(x) for x in args.pattern[1].split(",")]
        ok, positions = pattern_contains(p, q)
        return {
            "pattern": p,
            "host": q,
            "contained": ok,
            "positions": list(positions) if positions else None,
        }
    raise ParseError("rigid needs --superpose, --ramsey-failure or --pattern")


def cmd_run(args, extra):
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:
        import tomli as tomllib
    if not os.path.exists(args.config):
        raise ParseError(f"config file not found: {args.config}")
    with open(args.config, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"config parse error: {exc}") from None
    if "command" not in doc:
        raise ParseError("config needs a 'command' key")
    argv = doc["command"].split()
    for key, value in doc.get("params", {}).items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    argv.extend(extra)
    return main(argv)


# --- wiring -------------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--emit", help="write the delimited artifact here")
    parser.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--workers", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="homlab", description="desk-scale experiments around homogeneity"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homog", help="homogeneity / t-homogeneity of a graph")
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int)
    _add_common(p)

    p = sub.add_parser("gardiner", help="match a graph against the finite families")
    p.add_argument("--input", required=True)
    _add_common(p)

    p = sub.add_parser("schlafli", help="the 27-vertex lines-meet graph")
    p.add_argument("--format", choices=["g6", "edges"], default="g6")
    _add_common(p)

    p = sub.add_parser("spectrum", help="exact characteristic polynomial")
    p.add_argument("--input")
    p.add_argument("--explore-t3", action="store_true")
    p.add_argument("--max-n", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("fraisse", help="hereditary / JEP / AP checks")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--check", choices=["hereditary", "jep", "ap"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strong", action="store_true")
    _add_common(p)

    p = sub.add_parser("rado", help="random-graph oracles and witnesses")
    p.add_argument("--oracle", choices=["bit", "prime"], default="bit")
    p.add_argument("--check", choices=["extension", "reciprocity", "common-neighbour"])
    p.add_argument("--max-uv", type=int, default=10)
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--bound", type=int)
    p.add_argument("--back-and-forth", nargs=2, metavar=("A", "B"))
    p.add_argument("--steps", type=int, default=100)
    _add_common(p)

    p = sub.add_parser("sumfree", help="sum-free sets and the random measure")
    mode = p.add_subparsers(dest="mode", required=True)
    pc = mode.add_parser("census")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--sweep", action="store_true")
    _add_common(pc)
    pr = mode.add_parser("random")
    pr.add_argument("--trials", type=int, required=True)
    pr.add_argument("--N", type=int, required=True)
    pr.add_argument("--bin-width", type=float, default=0.01)
    _add_common(pr)
    pg = mode.add_parser("gamma")
    pg.add_argument("--set", required=True)
    pg.add_argument("--window", type=int, required=True)
    _add_common(pg)
    ph = mode.add_parser("henson")
    ph.add_argument("--set")
    ph.add_argument("--greedy", action="store_true")
    ph.add_argument("--gap", type=int, default=3)
    ph.add_argument("--k", type=int, default=2)
    ph.add_argument("--window", type=int, required=True)
    ph.add_argument("--bound", type=int)
    _add_common(ph)

    p = sub.add_parser("reducts", help="order reducts on n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--kind",
        choices=["order", "betweenness", "circular", "separation", "pure-set"],
        required=True,
    )
    _add_common(p)

    p = sub.add_parser("switch", help="switch a graph across a vertex cut")
    p.add_argument("--input", required=True)
    p.add_argument("--set", default="")
    p.add_argument("--perm", help="also search a switching set certifying this map")
    _add_common(p)

    p = sub.add_parser("rigid", help="superpositions, colourings, patterns")
    p.add_argument("--superpose", nargs=2, metavar=("TOURNAMENT", "TREE"))
    p.add_argument("--check", choices=["rigid"])
    p.add_argument("--ramsey-failure", metavar="STRUCTURE")
    p.add_argument("--order")
    p.add_argument("--pattern", nargs=2, metavar=("P", "Q"))
    _add_common(p)

    p = sub.add_parser("run", help="run a experiment from a TOML config")
    p.add_argument("--config", required=True)

    return parser


COMMANDS = {
    "homog": cmd_homog,
    "gardiner": cmd_gardiner,
    "schlafli": cmd_schlafli,
    "spectrum": cmd_spectrum,
    "fraisse": cmd_fraisse,
    "rado": cmd_rado,
    "sumfree": cmd_sumfree,
    "reducts": cmd_reducts,
    "switch": cmd_switch,
    "rigid": cmd_rigid,
}


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if args.command != "run" and extra:
        parser.error(f"unrecognised arguments: {' '.join(extra)}")
    started = time.time()
    try:
        if args.command == "run":
            return cmd_run(args, extra)
        verdicts = COMMANDS[args.command](args)
    except (ParseError, HomlabError, ValueError, OSError) as exc:
        print(f"homlab: error: {exc}", file=sys.stderr)
        return 2
    config = {
        k: v for k, v in sorted(vars(args).items()) if k != "command" and v is not None
    }
    report = build_report(args.command, config, verdicts, time.time() - started)
    sys.stdout.write(report_to_json(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
