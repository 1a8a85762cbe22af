#!/usr/bin/env python3
"""Runs the numpy change-detector oracle and `gevent detect1d` on identical
bit series and requires identical change points.

usage: crosscheck_detect1d.py <gevent binary>
"""
import subprocess
import sys

import numpy as np

from bocpd_montecarlo import run


def main():
    binary = sys.argv[1]
    rng = np.random.default_rng(2024)
    cases = []
    for gamma in (1e-6, 1e-4, 1e-3, 1e-2):
        for _ in range(6):
            T = int(rng.integers(500, 3000))
            levels = rng.uniform(0.05, 0.95, size=int(rng.integers(1, 5)))
            cuts = np.sort(rng.integers(0, T, size=len(levels) - 1))
            p = np.empty(T)
            start = 0
            for level, end in zip(levels, list(cuts) + [T]):
                p[start:end] = level
                start = end
            cases.append((gamma, (rng.random(T) < p).astype(np.uint8)))

    mismatches = 0
    total = 0
    for gamma, bits in cases:
        expected = run(bits[None, :], gamma)[0]
        series = "".join("1" if b else "0" for b in bits)
        out = subprocess.run([binary, "detect1d", "-", "--gamma", repr(gamma), "--changes-only"],
                             input=series, capture_output=True, text=True, check=True).stdout
        got = [int(line) for line in out.split()]
        total += len(expected)
        if got != expected:
            mismatches += 1
            print(f"mismatch gamma={gamma} T={len(bits)}: oracle={expected[:8]} cli={got[:8]}")
    print(f"{len(cases)} series, {total} change points, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
