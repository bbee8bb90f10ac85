from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from app.errors import ParameterError, TreeLimitError

MAX_INTERNAL_NODES = 10


@dataclass(frozen=True)
class TreeNode:
    """Ordered binary tree; terminal nodes have no children, internal two."""

    children: tuple[TreeNode, ...] = ()

    def __post_init__(self):
        if len(self.children) not in (0, 2):
            raise ParameterError(
                f"a node has 0 or 2 children, got {len(self.children)}"
            )

    @classmethod
    def terminal(cls) -> TreeNode:
        return cls()

    @classmethod
    def join(cls, left: TreeNode, right: TreeNode) -> TreeNode:
        return cls((left, right))

    @property
    def is_terminal(self) -> bool:
        return not self.children

    @cached_property
    def canonical(self) -> str:
        """'.' for a terminal node, '(left,right)' otherwise."""
        if self.is_terminal:
            return "."
        left, right = self.children
        return f"({left.canonical},{right.canonical})"

    @cached_property
    def n_internal(self) -> int:
        return sum(child.n_internal for child in self.children) + (
            0 if self.is_terminal else 1
        )

    @cached_property
    def n_terminal(self) -> int:
        if self.is_terminal:
            return 1
        return sum(child.n_terminal for child in self.children)

    def __str__(self) -> str:
        return self.canonical


@lru_cache(maxsize=None)
def _trees(j: int) -> tuple[TreeNode, ...]:
    if j == 0:
        return (TreeNode.terminal(),)
    out = []
    for j1 in range(j):
        for left in _trees(j1):
            for right in _trees(j - 1 - j1):
                out.append(TreeNode.join(left, right))
    return tuple(out)


def enumerate_trees(j: int) -> list[TreeNode]:
    """All ordered binary trees with j internal nodes."""
    if j < 0:
        raise ParameterError(f"j must be non-negative, got {j}")
    if j > MAX_INTERNAL_NODES:
        raise TreeLimitError(
            f"j={j} exceeds the enumeration limit {MAX_INTERNAL_NODES}"
        )
    return list(_trees(j))


def catalan(j: int) -> int:
    """C_j by the recurrence C_j = sum_i C_i C_{j-1-i}."""
    counts = [1]
    for k in range(1, j + 1):
        counts.append(sum(counts[i] * counts[k - 1 - i] for i in range(k)))
    return counts[j]
