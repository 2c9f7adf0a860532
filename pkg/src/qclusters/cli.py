"""Command-line front end: JSON state files in, JSON reports out.

Exit codes: 0 on success, 1 on validation failure (the message names the
violated invariant), 2 when --strict is set and a numerical-ambiguity flag
was raised.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .correlations import correlation_information, seen_correlation
from .factorization import finest_ucd, seevinck_condition, seevinck_violation_search
from .fixtures import bell_basis, fixture, fixture_names, measurement_family
from .linalg import ValidationError
from .measurement import ProjectiveDecomposition, distant_decomposition, luders_nonselective
from .partitions import ClusterDecomposition
from .sampling import DEFAULT_SEED, random_density_operator, rng_from
from .schmidt import partners_in_basis, schmidt_decompose
from .states import cluster_dims, reduced_state
from .tomography import probe_probabilities, product_probe_set, reconstruct, required_probe_count

from math import prod


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_density(path: str):
    return io.as_density_operator(io.read_state(path))


def _parse_partition_ordered(text: str):
    """Partition plus its clusters in the order the user wrote them."""
    cd = ClusterDecomposition.parse(text)
    written = [tuple(sorted(int(s) for s in chunk.split(","))) for chunk in text.split("|")]
    return cd, written


def cmd_fucd(args) -> int:
    rho = _load_density(args.input)
    result = finest_ucd(rho, args.tol)
    _emit(
        {
            "decomposition": str(result.decomposition),
            "tolerance": result.tolerance,
            "splits": [
                {
                    "cluster": ",".join(map(str, s.cluster)),
                    "parts": [",".join(map(str, p)) for p in s.parts],
                    "residual": s.residual,
                }
                for s in result.splits
            ],
            "overall_residual": result.overall_residual,
            "flags": list(result.flags),
        }
    )
    if args.strict and result.flags:
        print("numerical ambiguity flagged; failing under --strict", file=sys.stderr)
        return 2
    return 0


def cmd_seen(args) -> int:
    rho = _load_density(args.input)
    cd, written = _parse_partition_ordered(args.partition)
    string = io.read_events(args.events, cd, written)
    report = seen_correlation(rho, string)
    _emit(
        {
            "partition": str(cd),
            "coincidence": report.coincidence,
            "marginal_product": report.marginal_product,
            "seen": report.seen,
            "signed": report.signed,
        }
    )
    return 0


def cmd_info(args) -> int:
    rho = _load_density(args.input)
    cd = ClusterDecomposition.parse(args.partition)
    info = correlation_information(rho, cd)
    _emit(
        {
            "partition": str(cd),
            "units": "bits",
            "cluster_informations": {
                ",".join(map(str, c)): v
                for c, v in zip(cd.clusters, info.cluster_informations)
            },
            "among_clusters": info.among_clusters,
            "total": info.total,
        }
    )
    return 0


def cmd_schmidt(args) -> int:
    state = io.read_state(args.input)
    if not hasattr(state, "amplitudes"):
        raise ValidationError("pure-state", "schmidt analysis needs a state vector input")
    # the written order decides which part is the left one; do not canonicalize
    cd, written = _parse_partition_ordered(args.bipartition)
    if cd.n_clusters != 2:
        raise ValidationError("bipartition", "bipartition must have exactly two parts, e.g. '2,3|1,4'")
    left, right = written
    doc: dict = {"bipartition": f"{','.join(map(str, left))}|{','.join(map(str, right))}"}
    if args.basis == "bell":
        d_left = prod(cluster_dims(state.dims, left))
        if d_left != 4:
            raise ValidationError("bipartition", f"bell basis needs a two-qubit left part, got dim {d_left}")
        vectors, labels = bell_basis()
        pairs = partners_in_basis(state, (left, right), vectors)
        doc["coefficients"] = [c for _, c in pairs]
        doc["partners"] = [
            {"left_label": label, "coefficient": c, "partner": io.vector_to_json(p)}
            for label, (p, c) in zip(labels, pairs)
        ]
    else:
        form = schmidt_decompose(state, (left, right))
        doc["coefficients"] = [float(c) for c in form.coefficients]
        doc["partners"] = [
            {
                "coefficient": float(c),
                "left": io.vector_to_json(form.left_vectors[:, k]),
                "right": io.vector_to_json(form.right_vectors[:, k]),
            }
            for k, c in enumerate(form.coefficients)
        ]
    _emit(doc)
    return 0


def cmd_tomo(args) -> int:
    if not args.roundtrip:
        raise ValidationError("tomo-mode", "only --roundtrip mode is available")
    if args.input:
        rho = _load_density(args.input)
    elif args.dims:
        dims = tuple(int(d) for d in args.dims.split(","))
        rho = random_density_operator(dims, rng_from(args.seed))
    else:
        raise ValidationError("tomo-input", "provide --input or --dims")
    probes = product_probe_set(rho.dims)
    counts = required_probe_count(rho.dims)
    probs = probe_probabilities(rho, probes)
    recon = reconstruct(probs, probes, rho.dims)
    error = float(np.linalg.norm(recon.matrix - rho.matrix))
    _emit(
        {
            "dims": list(rho.dims),
            "probe_count": counts.state_parameters,
            "probes": counts.product_strings,
            "reconstruction_error": error,
            "gram_condition": recon.gram_condition,
            "min_eigenvalue": recon.min_eigenvalue,
            "flags": list(recon.flags),
        }
    )
    return 0


def cmd_measure(args) -> int:
    rho = _load_density(args.input)
    cluster = tuple(int(i) for i in args.subsystem.split(","))
    d = prod(cluster_dims(rho.dims, cluster))
    if args.projectors in ("z", "x", "bell"):
        pd = measurement_family(args.projectors, d)
    else:
        pd = ProjectiveDecomposition.from_matrices(io.projector_matrices_from_file(args.projectors))
    after = luders_nonselective(rho, cluster, pd)
    decomp = distant_decomposition(rho, cluster, pd)
    _emit(
        {
            "measured": ",".join(map(str, cluster)),
            "nonselective": io.state_to_json(after),
            "distant_cluster": ",".join(map(str, decomp.distant_cluster)),
            "outcomes": [
                {"weight": w, "state": io.state_to_json(s)} for w, s in decomp.outcomes
            ],
        }
    )
    return 0


def cmd_fixture(args) -> int:
    state = fixture(args.name)
    io.write_state(args.out, state)
    _emit(
        {
            "name": args.name,
            "path": args.out,
            "kind": "vector" if hasattr(state, "amplitudes") else "matrix",
            "dims": list(state.dims),
        }
    )
    return 0


def cmd_seevinck(args) -> int:
    rho = _load_density(args.input)
    groups = ClusterDecomposition.parse(args.groups)
    result = seevinck_violation_search(
        rho, groups, seed=args.seed, budget=args.search, threshold=args.threshold
    )
    doc = {
        "groups": str(groups),
        "samples": result.samples,
        "max_violation": result.max_gap,
        "lhs": result.worst.lhs,
        "rhs": result.worst.rhs,
        "holds_for_all_samples": result.max_gap <= 1e-10,
        "witness": None,
    }
    if result.witness is not None:
        doc["witness"] = [io.vector_to_json(v) for v in result.witness]
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qclusters",
        description="Analyze correlations and cluster factorization of multipartite quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fucd", help="finest uncorrelated cluster decomposition")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--strict", action="store_true", help="exit 2 if ambiguity flags are raised")
    p.set_defaults(func=cmd_fucd)

    p = sub.add_parser("seen", help="correlation a string of cluster events sees")
    p.add_argument("--input", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--events", required=True, help="JSON file: one entry per cluster")
    p.set_defaults(func=cmd_seen)

    p = sub.add_parser("info", help="correlation information over a partition (bits)")
    p.add_argument("--input", required=True)
    p.add_argument("--partition", required=True)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("schmidt", help="Schmidt coefficients and partners across a bipartition")
    p.add_argument("--input", required=True)
    p.add_argument("--bipartition", required=True)
    p.add_argument("--basis", choices=["product", "bell"], default="product")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("tomo", help="probe-tomography round trip")
    p.add_argument("--roundtrip", action="store_true")
    p.add_argument("--input")
    p.add_argument("--dims", help="comma-separated dims for a random state, e.g. 2,2")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("measure", help="projective measurement on a cluster")
    p.add_argument("--input", required=True)
    p.add_argument("--subsystem", required=True, help="measured cluster, e.g. 2,3")
    p.add_argument("--projectors", required=True, help="z | x | bell | path to a JSON matrix list")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("fixture", help="write a named canonical state to a file")
    p.add_argument("--name", required=True, help=f"one of: {', '.join(fixture_names())}")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("seevinck", help="four-observable factorization condition check")
    p.add_argument("--input", required=True)
    p.add_argument("--groups", required=True, help="two clusters over 1..4, e.g. 1,2|3,4")
    p.add_argument("--search", type=int, default=1000, help="random projector quadruples to sample")
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_seevinck)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation failure {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
