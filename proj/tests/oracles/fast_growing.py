#!/usr/bin/env python3
"""Brute-force oracle for F_m and F_{m,n} over base d with a bit budget.

Writes (or checks) tests/data/fast_growing.json. Values are hex strings;
"overflow" marks results whose computation would exceed the budget.
"""
import argparse
import json
import sys

OVERFLOW = None


class Budget:
    def __init__(self, bits):
        self.bits = bits


def f0(x, d, budget):
    if x + 1 > budget.bits:  # d**(x+1) has more than x+1 bits
        return OVERFLOW
    v = d ** (x + 1)
    return OVERFLOW if v.bit_length() > budget.bits else v


def fm(m, x, d, budget):
    if m == 0:
        return f0(x, d, budget)
    return iterate(m - 1, d * (1 + x), x, d, budget)


def iterate(m, count, x, d, budget):
    if count.bit_length() > budget.bits:
        return OVERFLOW
    while count > 0:
        x = fm(m, x, d, budget)
        if x is OVERFLOW:
            return OVERFLOW
        count -= 1
    return x


def fmn(m, n, xs, d, budget):
    k = len(xs)
    prev = 0
    for i in range(n):
        if i < k:
            arg = sum(xs[: i + 1])
            count = prev + d * (1 + xs[i])
        else:
            arg = sum(xs)
            count = prev + d
        prev = iterate(m, count, arg, d, budget)
        if prev is OVERFLOW:
            return OVERFLOW
    return prev


def enc(v):
    return "overflow" if v is OVERFLOW else format(v, "x")


def generate(bits):
    b = Budget(bits)
    out = {"budget_bits": bits, "f_m": [], "f_mn": [], "iterate": []}
    for d in (2, 3):
        for m in range(4):
            for x in range(17):
                out["f_m"].append({"m": m, "x": x, "d": d, "value": enc(fm(m, x, d, b))})
    for d in (2, 3):
        for m in range(3):
            for xs in ([0], [1], [2], [0, 0], [1, 0], [0, 1], [1, 1], [2, 1], [0, 0, 0]):
                for n in range(4):
                    out["f_mn"].append(
                        {"m": m, "n": n, "xs": xs, "d": d, "value": enc(fmn(m, n, xs, d, b))}
                    )
    for d in (2, 3):
        for m in range(3):
            for count in range(4):
                for x in range(4):
                    out["iterate"].append(
                        {"m": m, "count": count, "x": x, "d": d,
                         "value": enc(iterate(m, count, x, d, b))}
                    )
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bits", type=int, default=1_000_000)
    ap.add_argument("--write", help="write the table to this path")
    ap.add_argument("--check", help="compare against this frozen table")
    args = ap.parse_args()
    table = generate(args.bits)
    if args.write:
        with open(args.write, "w") as f:
            json.dump(table, f, indent=1)
            f.write("\n")
    if args.check:
        with open(args.check) as f:
            frozen = json.load(f)
        if frozen != table:
            print("frozen table differs from the oracle", file=sys.stderr)
            return 1
        print("frozen table matches the oracle")
    if not args.write and not args.check:
        json.dump(table, sys.stdout, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
