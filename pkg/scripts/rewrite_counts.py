"""Two-qubit cost of hashing and breeding circuits before and after rewriting."""
import itertools

from iswap_purify import rewrite


def row(name, c):
    rw = rewrite.rewrite(c)
    b, a = rewrite.two_qubit_counts(c), rewrite.two_qubit_counts(rw)
    rots = lambda cc: sum(v for k, v in rewrite.gate_counts(cc).items() if k[:2] in ("BX", "BY", "BZ"))  # noqa: E731
    print(f"{name},{b['iswap_equivalent']},{a['iswap_equivalent']},{rots(rw)}")


def main():
    print("circuit,iswap_equiv_before,iswap_equiv_after,rotations_after")
    for n in (2, 3):
        for bits in itertools.islice(itertools.product("01", repeat=2 * n), 1, None, 7):
            row(f"hashing n={n} s={''.join(bits)}", rewrite.hashing_template(n, "".join(bits)))
    for n in (2, 3, 4, 6):
        row(f"breeding {n}", rewrite.breeding_template(n))


if __name__ == "__main__":
    main()
