"""Edge-BWTs of de Bruijn graphs in the BOSS layout.

Edges of the order-k graph of a single string are its distinct (k+1)-mers,
read as (k-mer source, last-character label). A chain of dummy edges with
``$``-padded sources leads into the first k-mer, and one ``$``-labelled
edge leaves the last k-mer. Sorting the edges by their source read right to
left (``$`` smallest, ties by label) and concatenating the labels gives the
edge-BWT.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import EditStats, common_subsequence, edit_distance
from .errors import InvalidInputError
from .relative import RelativeSelect, build_relative
from .sequence import IndexedSequence, as_bytes

DUMMY = ord("$")


def _order(c: int) -> int:
    return -1 if c == DUMMY else c


def _edge_key(edge: tuple[bytes, bytes]):
    source, label = edge
    return tuple(_order(c) for c in reversed(source)), _order(label[0])


@dataclass(frozen=True)
class EdgeList:
    k: int
    edges: tuple[tuple[bytes, bytes], ...]
    is_sorted: bool = False

    def __len__(self):
        return len(self.edges)

    def sort(self) -> EdgeList:
        return EdgeList(self.k, tuple(sorted(self.edges, key=_edge_key)), True)

    def labels(self) -> bytes:
        return b"".join(label for _, label in self.edges)

    def dump(self) -> str:
        """One ``source label`` row per edge, as in the BOSS matrix."""
        return "\n".join(f"{s.decode('latin-1')} {l.decode('latin-1')}" for s, l in self.edges)


def build_edges(text, k: int) -> EdgeList:
    t = as_bytes(text)
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    if len(t) < k:
        raise InvalidInputError(f"text of length {len(t)} is shorter than k={k}")
    if DUMMY in t:
        raise InvalidInputError("text must not contain the dummy symbol '$'")
    pad = b"$" * k
    edges = [((pad[j:] + t[:j]), t[j : j + 1]) for j in range(k)]
    edges += [(t[i : i + k], t[i + k : i + k + 1]) for i in range(len(t) - k)]
    edges.append((t[len(t) - k :], b"$"))
    # distinct edges, first occurrence order
    return EdgeList(k, tuple(dict.fromkeys(edges)))


def edge_bwt(text, k: int) -> bytes:
    return build_edges(text, k).sort().labels()


def relative_edge_bwt(text1, text2, k: int) -> tuple[RelativeSelect, EditStats]:
    """Relative select over the edge-BWT of ``text2`` given that of ``text1``."""
    e1, e2 = edge_bwt(text1, k), edge_bwt(text2, k)
    aln = common_subsequence(e1, e2)
    rs = build_relative(IndexedSequence(e1), e2, aln, s1_text=e1)
    return rs, EditStats(edit_distance(e1, e2), aln.len_c, aln.d_indel, len(e1), len(e2))
