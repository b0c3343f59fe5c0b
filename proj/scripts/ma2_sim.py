#!/usr/bin/env python3
"""MA(2) simulator speaking the sl-sim/1 protocol on stdin/stdout.

Each request carries its own seed, so replies do not depend on which worker
process serves them.
"""
import json
import random
import sys

LENGTH = 50


def simulate(theta1, theta2, seed):
    rng = random.Random(seed)
    z = [rng.gauss(0.0, 1.0) for _ in range(LENGTH + 2)]
    return [z[t + 2] + theta1 * z[t + 1] + theta2 * z[t] for t in range(LENGTH)]


def main():
    out = sys.stdout
    out.write(json.dumps({"protocol": "sl-sim/1", "d": LENGTH, "p": 2}) + "\n")
    out.flush()
    for line in sys.stdin:
        if not line.strip():
            continue
        request = json.loads(line)
        theta1, theta2 = request["theta"]
        summary = simulate(theta1, theta2, request["seed"])
        out.write(json.dumps({"summary": summary}) + "\n")
        out.flush()


if __name__ == "__main__":
    main()
