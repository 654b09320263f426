"""Command line entry point: ``treelap verify | search | classify``.

Exit codes: 0 success, 1 verification failure (or a Violation from
``classify``), 2 configuration/input error, 3 a search produced a
re-validated violation candidate.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .fiedlerclass import classify
from .harness import search as hsearch
from .harness import verify as hverify
from .lapxform import laplacian_of
from .matcore import MatrixError, eigh, load_matrix_csv
from .monocond import ConditionKind, Kind, gen_condition_matrix
from .treegraph import TreeError, adjacency_matrix, distance_matrix, load_tree, make_rng

log = logging.getLogger("treelap")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CANDIDATE = 0, 1, 2, 3
TARGETS = ("lemma7", "lemma8", "lemma9", "thm11", "corollary", "all")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_lemma7(args) -> dict:
    n_max = args.n_max or 128
    res = hverify.verify_lemma7(n_max)
    failed = [n for n, ok in res.items() if not ok]
    return {"passed": not failed, "n_max": n_max, "failed_n": failed}


def _suite_lemma8(args) -> dict:
    n_max = args.n_max or 40
    reports = hverify.lemma8_suite(args.trials or 100, n_max, args.seed)
    bad = [r.n for r in reports if not r.ok]
    return {
        "passed": not bad,
        "count": len(reports),
        "n_max": n_max,
        "max_spectrum_error": max(r.spectrum_error for r in reports),
        "max_compress_residual": max(r.compress_residual for r in reports),
        "max_lift_residual": max(r.lift_residual for r in reports),
        "max_lift_orthogonality": max(r.lift_orthogonality for r in reports),
        "charpoly_checked": sum(r.charpoly_identity is not None for r in reports),
        "failed_n": bad,
    }


def _suite_lemma9(args) -> dict:
    res = hverify.sign_suite(args.trials or 100, args.n_max or 30, args.seed)
    out = {}
    for cond, rows in res.items():
        out[cond] = {"count": len(rows), "matched": sum(r[3] for r in rows)}
    return {"passed": all(v["count"] == v["matched"] for v in out.values()), "conditions": out}


def _suite_thm11(args) -> dict:
    n_max = args.n or 30
    count = args.trials or 100
    rng = make_rng(args.seed, 11)
    failures = []
    done = 0
    for part, kind in (("I", Kind.PATH_I), ("II", Kind.PATH_II)):
        for i in range(count):
            n = int(rng.integers(2, n_max + 1))
            fam = "transform" if i % 2 == 0 else "repaired"
            A = gen_condition_matrix(ConditionKind(kind), n, args.seed * 7919 + i, fam)
            r = hverify.verify_thm11(A, part)
            done += 1
            if not r.ok:
                failures.append({"part": part, "n": n, "family": fam, "status": r.status.value})
    return {"passed": not failures, "count": done, "n_max": n_max, "failures": failures}


def _suite_corollary(args) -> dict:
    n_max = args.n or 200
    failures = []
    for n in range(2, n_max + 1):
        r = hverify.verify_corollary(n)
        if not r.ok:
            failures.append({"n": n, "cluster_size": r.cluster_size, "sign": r.sign_class,
                             "monotone": r.monotone})
    return {"passed": not failures, "n_max": n_max, "failures": failures}


_SUITES = {
    "lemma7": _suite_lemma7,
    "lemma8": _suite_lemma8,
    "lemma9": _suite_lemma9,
    "thm11": _suite_thm11,
    "corollary": _suite_corollary,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.target == "all" else [args.target]
    suites = {}
    for name in names:
        log.info("running %s", name)
        suites[name] = _SUITES[name](args)
    passed = all(s["passed"] for s in suites.values())
    _emit(json.dumps({"target": args.target, "seed": args.seed, "passed": passed,
                      "suites": suites}, indent=2), args.out)
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def cmd_search(args) -> int:
    cfg = hsearch.SearchConfig(
        kind=args.kind, trees=args.trees, family=args.family, master_seed=args.seed,
        trials=args.trials, zero_tol=args.zero_tol, cluster_tol=args.cluster_tol,
        eig_tol=args.eig_tol, samples=args.samples, strict=args.strict)
    try:
        cfg.validate()
    except hsearch.ConfigError as exc:
        print(f"treelap search: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    def progress(done, total):
        log.info("%d / %d", done, total)

    report = hsearch.search_conjecture(cfg, workers=args.workers, progress=progress)
    text = report.to_csv() if args.format == "csv-summary" else report.to_json()
    _emit(text, args.out)
    counts = report.status_counts
    log.info("status counts %s, digest %s", counts, report.digest)
    return EXIT_CANDIDATE if report.candidates else EXIT_OK


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    try:
        tree = load_tree(args.tree)
        if args.matrix == "distance":
            A = distance_matrix(tree)
        elif args.matrix == "adjacency":
            A = adjacency_matrix(tree)
        else:
            A = load_matrix_csv(args.matrix)
    except (OSError, TreeError, MatrixError) as exc:
        print(f"treelap classify: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if A.n != tree.n:
        print(f"treelap classify: matrix is {A.n} x {A.n} but tree has {tree.n} vertices",
              file=sys.stderr)
        return EXIT_CONFIG
    if tree.n < 2:
        print("treelap classify: need at least 2 vertices", file=sys.stderr)
        return EXIT_CONFIG

    L = laplacian_of(A)
    dec = eigh(L.matrix, cluster_tol=args.cluster_tol)
    index = 1 if args.eigen == "lambda2" else tree.n - 1
    cluster = dec.cluster_of(index)
    X = dec.basis(cluster)
    if len(cluster) == 1:
        f = X[:, 0]
        c = classify(tree, f, args.zero_tol * float(np.max(np.abs(f))))
        stage = "simple"
    else:
        hit = hsearch.search_eigenspace(
            tree, X, make_rng(args.seed, 17),
            args.samples if args.samples is not None else hsearch.random_sample_count(len(cluster)),
            args.zero_tol)
        if hit.classification is not None:
            f, c, stage = hit.vector, hit.classification, hit.stage
        else:
            f = X[:, 0]
            c = classify(tree, f, args.zero_tol * float(np.max(np.abs(f))))
            stage = "basis-unresolved"
    out = c.to_dict()
    out.update(eigen=args.eigen, eigenvalue=float(dec.values[index]),
               cluster_size=len(cluster), stage=stage,
               vector=(f / np.max(np.abs(f))).tolist())
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK if c.ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treelap", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--target", choices=TARGETS, default="all")
    v.add_argument("--n", type=int, default=None,
                   help="largest path size (corollary: 200, thm11: 30)")
    v.add_argument("--n-max", type=int, default=None,
                   help="largest size (lemma7: 128, lemma8: 40, lemma9: 30)")
    v.add_argument("--trials", type=int, default=None, help="random instances per suite (100)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--format", choices=("json",), default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search for conjecture counterexamples")
    s.add_argument("--kind", choices=("conj1", "conj2"), required=True)
    s.add_argument("--trees", required=True, help="exhaustive:N or random:N:COUNT")
    s.add_argument("--family", choices=hsearch.FAMILIES, default="distance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=1, help="matrices per tree (random families)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--strict", action="store_true",
                   help="generate matrices satisfying the strict inequalities")
    s.add_argument("--zero-tol", type=float, default=1e-8)
    s.add_argument("--cluster-tol", type=float, default=1e-8)
    s.add_argument("--eig-tol", type=float, default=1e-12)
    s.add_argument("--samples", type=int, default=None,
                   help="random eigenspace combinations (default by cluster size)")
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv-summary"), default="json")
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("classify", help="classify an eigenvector on a tree")
    c.add_argument("--tree", required=True, help="edge-list file")
    c.add_argument("--matrix", default="distance",
                   help="'distance', 'adjacency' or a CSV matrix file")
    c.add_argument("--eigen", choices=("lambda2", "lambdamax"), default="lambdamax")
    c.add_argument("--zero-tol", type=float, default=1e-8)
    c.add_argument("--cluster-tol", type=float, default=1e-8)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.add_argument("--format", choices=("json",), default="json")
    c.set_defaults(func=cmd_classify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name, low in (("n", 2), ("n_max", 2), ("trials", 1), ("workers", 1), ("samples", 0)):
        val = getattr(args, name, None)
        if val is not None and val < low:
            print(f"treelap: --{name.replace('_', '-')} must be >= {low}", file=sys.stderr)
            return EXIT_CONFIG
    for name in ("zero_tol", "cluster_tol", "eig_tol"):
        val = getattr(args, name, None)
        if val is not None and val <= 0:
            print(f"treelap: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_CONFIG
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
