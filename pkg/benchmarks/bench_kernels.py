"""Compare the compiled and pure-Python Monte Carlo kernels.

Usage: python3 benchmarks/bench_kernels.py [--trials N] [--physical-trials N]
"""

import argparse
import time

from mmwave_norm import AntennaPattern, BlockageModel, NetworkConfig, TierConfig
from mmwave_norm._backend import available_backends
from mmwave_norm.mcsim import SimConfig, SimKind, simulate

DEG = 3.141592653589793 / 180.0


def two_tier_network():
    p = AntennaPattern.explicit(20 * DEG, 10.0, 0.1)
    tiers = (TierConfig(1.0, 1 / 200), TierConfig(5.0, 1 / 500))
    return NetworkConfig(tiers, p, p, BlockageModel(0.117, 200.0), steering_sigma=4 * DEG)


def timed(sim, thresholds, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = simulate(sim, thresholds, backend)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--physical-trials", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    net = two_tier_network()
    thresholds = [10 ** (t / 10) for t in range(-10, 31, 2)]
    cases = [
        ("branch-mirror", SimConfig(net, trials=args.trials, seed=1)),
        ("physical", SimConfig(net, trials=args.physical_trials, seed=1, kind=SimKind.PHYSICAL)),
    ]
    backends = available_backends()
    print(f"{'kernel':<14} {'trials':>9} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f" {'speedup':>8} identical")
    for name, sim in cases:
        times, results = [], []
        for b in backends:
            t, r = timed(sim, thresholds, b, args.repeat)
            times.append(t)
            results.append(r)
        speedup = times[-1] / times[0] if len(times) == 2 else float("nan")
        same = all(r == results[0] for r in results)
        print(f"{name:<14} {sim.trials:>9} " + " ".join(f"{t:>12.3f}" for t in times) + f" {speedup:>7.1f}x {same}")


if __name__ == "__main__":
    main()
