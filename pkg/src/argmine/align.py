"""Word-level Needleman-Wunsch global alignment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

Pair = tuple[Optional[int], Optional[int]]

_DIAG, _UP, _LEFT = 0, 1, 2


@dataclass(frozen=True)
class AlignmentParams:
    match_score: float = 1.0
    mismatch_score: float = -1.0
    gap_score: float = -1.0
    min_span_identity: float = 0.5

    def __post_init__(self):
        if not self.match_score > self.mismatch_score:
            raise ValueError("match_score must exceed mismatch_score")
        if not self.gap_score < self.match_score:
            raise ValueError("gap_score must be below match_score")
        if not 0.0 <= self.min_span_identity <= 1.0:
            raise ValueError("min_span_identity must lie in [0, 1]")


def same_word(a: str, b: str) -> bool:
    return a.casefold() == b.casefold()


def nw_align(generated_words: Sequence[str], source_words: Sequence[str],
             params: AlignmentParams = AlignmentParams(),
             skip_penalty: Sequence[int] | None = None) -> list[Pair]:
    """Globally align two word sequences.

    Returns ``(gen_index, src_index)`` pairs in order, with ``None`` on the side
    that has a gap.  The alignment maximises the total score under
    ``params``.  ``skip_penalty[i]`` (length ``len(generated_words) + 1``) is a
    secondary cost for leaving a source word unmatched between generated words
    ``i - 1`` and ``i``; it only breaks ties between equally scoring alignments.
    """
    g = [w.casefold() for w in generated_words]
    s = [w.casefold() for w in source_words]
    n, m = len(g), len(s)
    match, mismatch, gap = params.match_score, params.mismatch_score, params.gap_score
    pen = list(skip_penalty) if skip_penalty is not None else [0] * (n + 1)
    if len(pen) != n + 1:
        raise ValueError("skip_penalty must have len(generated_words) + 1 entries")

    H = [[0.0] * (m + 1) for _ in range(n + 1)]
    P = [[0] * (m + 1) for _ in range(n + 1)]
    B = [bytearray(m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        H[0][j] = H[0][j - 1] + gap
        P[0][j] = P[0][j - 1] + pen[0]
        B[0][j] = _LEFT
    for i in range(1, n + 1):
        H[i][0] = H[i - 1][0] + gap
        B[i][0] = _UP

    for i in range(1, n + 1):
        gi = g[i - 1]
        hp, hc = H[i - 1], H[i]
        pp, pc = P[i - 1], P[i]
        bc = B[i]
        pen_i = pen[i]
        for j in range(1, m + 1):
            best = hp[j - 1] + (match if gi == s[j - 1] else mismatch)
            bpen = pp[j - 1]
            move = _DIAG
            cand = hp[j] + gap
            if cand > best or (cand == best and pp[j] < bpen):
                best, bpen, move = cand, pp[j], _UP
            cand = hc[j - 1] + gap
            cpen = pc[j - 1] + pen_i
            if cand > best or (cand == best and cpen < bpen):
                best, bpen, move = cand, cpen, _LEFT
            hc[j] = best
            pc[j] = bpen
            bc[j] = move

    pairs: list[Pair] = []
    i, j = n, m
    while i > 0 or j > 0:
        move = B[i][j]
        if move == _DIAG:
            i -= 1
            j -= 1
            pairs.append((i, j))
        elif move == _UP:
            i -= 1
            pairs.append((i, None))
        else:
            j -= 1
            pairs.append((None, j))
    pairs.reverse()
    return pairs


def alignment_score(pairs: Sequence[Pair], generated_words: Sequence[str],
                    source_words: Sequence[str], params: AlignmentParams = AlignmentParams()) -> float:
    total = 0.0
    for gi, sj in pairs:
        if gi is None or sj is None:
            total += params.gap_score
        elif same_word(generated_words[gi], source_words[sj]):
            total += params.match_score
        else:
            total += params.mismatch_score
    return total
