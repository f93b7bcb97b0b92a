"""Benchmark the compiled kernels against the numpy fallback.

Times a fixed number of extragradient iterations and a phase-1 descent on a
synthetic dense instance, for each backend that is importable, and prints
per-iteration costs with the speedup.

    python benchmarks/bench_kernels.py --dim-x 40 --dim-y 40 --iters 20000
"""

import argparse
import time

import numpy as np

from cone_kkt import ConeSpec, LinearMap, ProblemSpec, QuadraticFunctional, dual, project, validate
from cone_kkt._kernels import _reference
from cone_kkt.solver import operator_norm

try:
    from cone_kkt._kernels import _core
except ImportError:
    _core = None


def synthetic_problem(dim_x, dim_y, seed=0):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((dim_x, dim_x)) / np.sqrt(dim_x)
    K = ConeSpec.orthant(dim_x)
    P = ConeSpec(tuple(rng.choice(("nonneg", "zero", "free"), size=dim_y, p=(0.6, 0.2, 0.2))))
    A = rng.standard_normal((dim_y, dim_x))
    x_rand = project(K, rng.standard_normal(dim_x))
    p_rand = project(P, rng.standard_normal(dim_y))
    b = A @ x_rand + p_rand
    return validate(ProblemSpec(
        objective=QuadraticFunctional(M.T @ M, rng.standard_normal(dim_x), 0.0),
        A=LinearMap(A), b=b, K=K, P=P, name=f"bench-{dim_x}x{dim_y}"))


def time_extragradient(impl, prob, iters, repeats):
    tau = 0.9 / (operator_norm(prob.A.entries) + operator_norm(prob.objective.Q) + 1.0)
    x0 = project(prob.K, np.zeros(prob.dim_x))
    z0 = np.zeros(prob.dim_y)
    args = (prob.objective.Q, prob.objective.c, prob.objective.d,
            prob.A.entries, prob.b,
            prob.K.codes(), dual(prob.K).codes(), prob.P.codes(), dual(prob.P).codes(),
            x0, z0, tau, iters, 1e-300)
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = impl.extragradient_loop(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def time_phase1(impl, prob, iters, repeats):
    b_bar = prob.b - 0.05 * np.ones(prob.dim_y)
    tau = 0.9 / max(operator_norm(prob.A.entries) ** 2, 1e-12)
    x0 = project(prob.K, np.zeros(prob.dim_x))
    args = (prob.A.entries, b_bar, prob.K.codes(), prob.P.codes(),
            x0, tau, iters, 0.0, 0.0)  # zero tolerances: run the full budget
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = impl.phase1_loop(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim-x", type=int, default=40)
    parser.add_argument("--dim-y", type=int, default=40)
    parser.add_argument("--iters", type=int, default=20_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    prob = synthetic_problem(args.dim_x, args.dim_y)
    backends = [("python", _reference)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"instance {prob.name}, budget {args.iters} iterations, best of {args.repeats}\n")
    print(f"{'kernel':<16}{'backend':<10}{'total':>10}{'iters':>9}{'per-iter':>12}")
    rows = {}
    for name, impl in backends:
        t, res = time_extragradient(impl, prob, args.iters, args.repeats)
        done = max(int(res[2]), 1)
        rows[("extragradient", name)] = t / done
        print(f"{'extragradient':<16}{name:<10}{t:>9.3f}s{done:>9}{t / done * 1e6:>10.2f}us")
        t, res = time_phase1(impl, prob, args.iters, args.repeats)
        done = max(int(res[2]), 1)
        rows[("phase1", name)] = t / done
        print(f"{'phase1':<16}{name:<10}{t:>9.3f}s{done:>9}{t / done * 1e6:>10.2f}us")

    if _core is not None:
        for kernel in ("extragradient", "phase1"):
            speedup = rows[(kernel, "python")] / rows[(kernel, "compiled")]
            print(f"\n{kernel}: compiled is {speedup:.1f}x faster per iteration")


if __name__ == "__main__":
    main()
