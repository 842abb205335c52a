"""Synthetic citation corpora with planted field structure.

``block_corpus`` builds blocks of journals that cite each other densely and
other blocks sparsely, plus one focal journal that cites into and is cited
from every block. The bundled fixture under ``citecology/data`` is
``block_corpus()`` with its defaults.
"""

from __future__ import annotations

from decimal import Decimal
from importlib import resources

import numpy as np

from .corpus import CitationCorpus, JournalRef

FOCAL = "FOCAL"
FIXTURE_SEED = 20041988


def block_journal(block: int, i: int) -> str:
    return f"B{block + 1}J{i + 1}"


def block_corpus(
    n_blocks: int = 3,
    block_size: int = 9,
    seed: int = FIXTURE_SEED,
    within: tuple[int, int] = (8, 40),
    self_cites: tuple[int, int] | None = (100, 200),
    cross_rate: float = 0.06,
    focal_cites: tuple[int, int] = (30, 60),
    focal_cited: tuple[int, int] = (30, 60),
    single_exporters: int = 5,
    isolates: int = 0,
    label: str = "synthetic",
) -> CitationCorpus:
    """Planted-partition citation corpus.

    Parameters
    ----------
    within : (low, high)
        Range of within-block counts between distinct journals.
    self_cites : (low, high), optional
        Range of self-citation counts; ``None`` reuses ``within``.
    cross_rate : float
        Probability that an ordered cross-block pair carries 1-2 citations.
    focal_cites, focal_cited : (low, high)
        Ranges of counts from the focal into each block journal and back.
    single_exporters : int
        That many block journals (the last ones of each block, round robin)
        cite the focal only once, so they fall out of the export environment.
    isolates : int
        Extra journals cited only by the focal (they survive the environment
        threshold but are dropped as isolates under column profiles).
    """
    rng = np.random.default_rng(seed)
    journals = [block_journal(b, i) for b in range(n_blocks) for i in range(block_size)]
    block_of = {j: b for b in range(n_blocks) for j in journals[b * block_size : (b + 1) * block_size]}
    diag = self_cites or within
    records = []
    for a in journals:
        for b in journals:
            if a == b:
                c = int(rng.integers(diag[0], diag[1] + 1))
            elif block_of[a] == block_of[b]:
                c = int(rng.integers(within[0], within[1] + 1))
            elif rng.random() < cross_rate:
                c = int(rng.integers(1, 3))
            else:
                c = 0
            if c:
                records.append((a, b, c))

    singles = set()
    for s in range(single_exporters):
        b, i = s % n_blocks, block_size - 1 - s // n_blocks
        singles.add(block_journal(b, i))
    for j in journals:
        records.append((FOCAL, j, int(rng.integers(focal_cites[0], focal_cites[1] + 1))))
        back = 1 if j in singles else int(rng.integers(focal_cited[0], focal_cited[1] + 1))
        records.append((j, FOCAL, back))
    records.append((FOCAL, FOCAL, int(rng.integers(diag[0], diag[1] + 1))))
    for k in range(isolates):
        records.append((FOCAL, f"ISO{k + 1}", int(rng.integers(2, 6))))

    impact = {}
    for j in [FOCAL, *journals]:
        impact[j] = Decimal(str(round(float(rng.uniform(0.5, 4.0)), 3)))
    meta = [JournalRef(FOCAL, "Focal Journal", impact[FOCAL])]
    meta += [JournalRef(j, f"Journal {j}", impact[j]) for j in journals]
    meta += [JournalRef(f"ISO{k + 1}", f"Isolate {k + 1}", None) for k in range(isolates)]
    return CitationCorpus.from_records(records, label=label, metadata=meta)


def planted_blocks(n_blocks: int = 3, block_size: int = 9) -> dict[str, int]:
    """Journal id -> 1-based planted block."""
    return {block_journal(b, i): b + 1 for b in range(n_blocks) for i in range(block_size)}


def fixture_path(name: str):
    """Path to a bundled data file (``fixture_citations.csv``, ``fixture_journals.csv``)."""
    return resources.files("citecology") / "data" / name
