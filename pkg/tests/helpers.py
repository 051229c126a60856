"""Shared test oracles and data: classical code library, interleave counting."""


def torus_code(k):
    """The (2,k) torus knot code for odd k: over/under alternating."""
    syms = []
    for rnd in range(2):
        for i in range(1, k + 1):
            role = "O" if (i + rnd) % 2 else "U"
            syms.append(f"{role}{i}+")
    return " ".join(syms)


def splice(code_a, code_b):
    """Connected sum at the base points; ids of the second code shifted."""
    shift = max(int(tok[1:-1]) for tok in code_a.split())
    toks = [f"{t[0]}{int(t[1:-1]) + shift}{t[-1]}" for t in code_b.split()]
    return code_a + " " + " ".join(toks)


TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"
FIGURE8 = "O1+ U2+ O3- U4- O2+ U1+ O4- U3-"
VIRTUAL_TREFOIL = "O1+ O2+ U1+ U2+"

# codes of actual plane curves, up to 12 crossings
CLASSICAL = [
    "O1+ U1+",
    TREFOIL,
    FIGURE8,
    torus_code(5),
    torus_code(7),
    splice(TREFOIL, TREFOIL),
    splice(FIGURE8, TREFOIL),
    splice(TREFOIL, splice(TREFOIL, TREFOIL)),
    splice(FIGURE8, FIGURE8),
]


def gauss_oracle(d, crossing):
    """Brute-force interleaving count mod 2."""
    over, under = d.positions(crossing)
    lo, hi = min(over, under), max(over, under)
    inside = set(range(lo + 1, hi))
    count = 0
    for other in d.crossings():
        if other == crossing:
            continue
        o2, u2 = d.positions(other)
        if (o2 in inside) + (u2 in inside) == 1:
            count += 1
    return count % 2
