import typing

import numpy as np

from wermerset.utils.errors import ClusterAmbiguity


class RootSet(object):
    """A multiset of complex roots, kept as distinct representatives with integer
    multiplicities

    Params:
        roots: sequence of complex
            One representative per cluster
        multiplicities: sequence of int
            How many computed roots collapsed into each representative
        cluster_tol: float
            The distance under which two computed roots were treated as one
    """

    __slots__ = ("roots", "multiplicities", "cluster_tol")

    def __init__(
        self,
        roots: typing.Sequence[complex],
        multiplicities: typing.Sequence[int],
        cluster_tol: float = 0.0,
    ):
        self.roots = np.asarray(roots, dtype=complex).reshape(-1)
        self.multiplicities = np.asarray(multiplicities, dtype=int).reshape(-1)
        self.cluster_tol = float(cluster_tol)
        self.roots.setflags(write=False)
        self.multiplicities.setflags(write=False)

    @classmethod
    def empty(cls) -> "RootSet":
        return cls([], [], 0.0)

    @classmethod
    def from_values(
        cls, values: typing.Sequence[complex], cluster_tol: float, strict: bool = False
    ) -> "RootSet":
        """Clusters raw root values (single linkage at cluster_tol) into a RootSet

        Params:
            values: sequence of complex
                Every computed root, repeated roots included
            cluster_tol: float
                Values closer than this join the same cluster
            strict: bool = False
                Whether to raise ClusterAmbiguity when two cluster centres still lie
                within 10x cluster_tol of each other
        """

        values = np.asarray(values, dtype=complex).reshape(-1)
        count = values.size
        if count == 0:
            return cls.empty()

        # Union-find over the pairs closer than the tolerance
        parent = list(range(count))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        distances = np.abs(values[:, None] - values[None, :])
        close_i, close_j = np.nonzero(np.triu(distances <= cluster_tol, k=1))
        for i, j in zip(close_i, close_j):
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

        # Gather the clusters in order of first appearance
        members: typing.Dict[int, typing.List[int]] = {}
        for i in range(count):
            members.setdefault(find(i), []).append(i)
        centres = [complex(np.mean(values[idx])) for idx in members.values()]
        multiplicities = [len(idx) for idx in members.values()]

        if strict:
            for a in range(len(centres)):
                for b in range(a + 1, len(centres)):
                    if abs(centres[a] - centres[b]) <= 10 * cluster_tol:
                        raise ClusterAmbiguity(centres[a], centres[b], cluster_tol)

        order = sorted(range(len(centres)), key=lambda k: (centres[k].real, centres[k].imag))
        return cls(
            [centres[k] for k in order],
            [multiplicities[k] for k in order],
            cluster_tol,
        )

    @property
    def degree(self) -> int:
        """The number of roots counted with multiplicity"""

        return int(self.multiplicities.sum())

    def values(self) -> np.ndarray:
        """Every root repeated by its multiplicity"""

        return np.repeat(self.roots, self.multiplicities)

    def nearest_distance(self, w) -> np.ndarray:
        """The distance from each given point to the closest root"""

        w = np.asarray(w, dtype=complex)
        if self.roots.size == 0:
            return np.full(w.shape, np.inf)
        return np.min(np.abs(w[..., None] - self.roots), axis=-1)

    def min_gap(self) -> float:
        """The smallest distance between two distinct representatives (0 with a repeated root)"""

        if np.any(self.multiplicities > 1):
            return 0.0
        if self.roots.size < 2:
            return np.inf
        distances = np.abs(self.roots[:, None] - self.roots[None, :])
        distances[np.diag_indices_from(distances)] = np.inf
        return float(distances.min())

    def contains(self, other: "RootSet", tol: float) -> bool:
        """Whether every root of other appears here with at least the same multiplicity"""

        for root, mult in zip(other.roots, other.multiplicities):
            distances = np.abs(self.roots - root)
            if distances.size == 0 or distances.min() > tol:
                return False
            if self.multiplicities[int(np.argmin(distances))] < mult:
                return False
        return True

    def __len__(self) -> int:
        return self.roots.size

    def __repr__(self) -> str:
        return f"RootSet[{len(self)} distinct <degree {self.degree}>]"
