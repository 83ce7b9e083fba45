"""Breakeven fidelity against pulse error, with the quadratic coefficient."""
import argparse

import numpy as np

from iswap_purify.purify import PulseError, breakeven_fidelity


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-3, 3e-3, 0.01, 0.02, 0.05, 0.1, 0.2])
    args = ap.parse_args()
    print("eps,breakeven,quadratic,diff,coefficient")
    for e in args.eps:
        b = breakeven_fidelity(PulseError(e))
        q = 0.5 + 3 * e * e
        print(f"{e:.6g},{b:.12f},{q:.12f},{b - q:.3e},{(b - 0.5) / e**2:.6f}")
    # fit the remainder: (b - 1/2 - 3 eps^2) ~ c eps^4
    es = np.array([0.01, 0.02, 0.03, 0.05])
    rem = np.array([breakeven_fidelity(PulseError(e)) - 0.5 - 3 * e * e for e in es])
    print(f"# quartic remainder coefficient ~ {np.polyfit(es**4, rem, 1)[0]:.2f}")


if __name__ == "__main__":
    main()
