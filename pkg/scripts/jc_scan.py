"""Exchange frequency from direct simulation vs the dispersive estimate."""
import argparse

from iswap_purify.jc import JCParams, jc_validate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.1, 0.15, 0.2])
    ap.add_argument("--cutoff", type=int, default=5)
    args = ap.parse_args()
    print("alpha,expected_rad_s,measured_rad_s,relative_error,two_alpha_sq")
    for a in args.alpha:
        v = jc_validate(JCParams.symmetric(a, cutoff=args.cutoff))
        print(f"{a},{v.exchange_frequency_expected:.9e},{v.exchange_frequency_measured:.9e},"
              f"{v.relative_error:.4e},{2 * a * a:.4e}")


if __name__ == "__main__":
    main()
