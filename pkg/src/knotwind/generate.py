"""Seeded random diagrams and reproducible seed splitting for test campaigns."""

from __future__ import annotations

import hashlib
import random

from .diagram import Diagram, Jump, OVER, Passage, UNDER


def split_seed(master: int, index: int) -> int:
    """Derive a per-trial seed; serial and parallel runs then agree."""
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def random_diagram(
    seed: int | random.Random,
    max_genus: int = 3,
    max_crossings: int = 12,
    max_jumps: int = 6,
    mark_range: int = 2,
) -> Diagram:
    """A uniform-ish valid diagram: shuffled passages, jumps, sparse marks."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    genus = rng.randint(0, max_genus)
    n_crossings = rng.randint(0, max_crossings)
    n_jumps = rng.randint(0, max_jumps)
    symbols: list = []
    for ident in range(1, n_crossings + 1):
        sign = rng.choice((1, -1))
        symbols.append(Passage(ident, OVER, sign))
        symbols.append(Passage(ident, UNDER, sign))
    for _ in range(n_jumps):
        symbols.append(Jump(rng.choice((1, -1))))
    rng.shuffle(symbols)
    marks = {}
    if genus:
        n_edges = max(len(symbols), 1)
        for edge in range(n_edges):
            if rng.random() < 0.25:
                marks[edge] = tuple(
                    rng.randint(-mark_range, mark_range) for _ in range(2 * genus)
                )
    return Diagram(genus, tuple(symbols), marks)
