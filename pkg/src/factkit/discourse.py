"""RST discourse trees (ingested from an external parser) and the 20
discourse features: 18 relation indicators linking the target sentence to
the rest of its segment, plus nucleus/satellite counts inside the target
sentence itself.

Tree file format (line-delimited JSON): ``{"segment_id": ..., "tree": T}``
where ``T`` is either ``{"leaf": {"sentence_id": int, "edu_span": [a, b]}}``
or ``{"relation": str, "nucleus_side": "left"|"right"|"both",
"children": [T, T]}``.  Fine-grained parser labels are folded onto the
18-relation coarse inventory through a JSON mapping (a default ships with
the package).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

RELATIONS = (
    "Attribution", "Background", "Cause", "Comparison", "Condition",
    "Contrast", "Elaboration", "Enablement", "Evaluation", "Explanation",
    "Joint", "Manner-Means", "Topic-Comment", "Summary", "Temporal",
    "Topic-Change", "Textual-Organization", "Same-Unit",
)
_RELATION_INDEX = {r: i for i, r in enumerate(RELATIONS)}
NUCLEUS_SIDES = ("left", "right", "both")

DISCOURSE_DIM = 20


class RstSchemaError(ValueError):
    pass


@dataclass(frozen=True)
class RstLeaf:
    sentence_id: int
    edu_span: tuple[int, int] = (0, 0)

    def leaves(self):
        yield self

    def sentence_ids(self) -> frozenset[int]:
        return frozenset({self.sentence_id})


@dataclass(frozen=True)
class RstNode:
    relation: str
    nucleus_side: str
    left: "RstNode | RstLeaf"
    right: "RstNode | RstLeaf"

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def sentence_ids(self) -> frozenset[int]:
        return self.left.sentence_ids() | self.right.sentence_ids()


RstTree = RstNode | RstLeaf


def default_relation_map() -> dict[str, str]:
    raw = json.loads(
        (resources.files("factkit") / "resources" / "rst_relation_map.json")
        .read_text(encoding="utf-8")
    )
    return {k: v for k, v in raw.items() if not k.startswith("__")}


def _parse_tree(obj, relation_map: dict[str, str]) -> RstTree:
    if "leaf" in obj:
        leaf = obj["leaf"]
        span = tuple(leaf.get("edu_span", (0, 0)))
        return RstLeaf(int(leaf["sentence_id"]), span)
    relation = obj.get("relation")
    if relation is None:
        raise RstSchemaError("node needs either 'leaf' or 'relation'")
    relation = relation_map.get(relation, relation)
    if relation not in _RELATION_INDEX:
        raise RstSchemaError(f"unknown relation label {relation!r}")
    side = obj.get("nucleus_side", "left")
    if side not in NUCLEUS_SIDES:
        raise RstSchemaError(f"invalid nucleus side {side!r}")
    children = obj.get("children", ())
    if len(children) != 2:
        raise RstSchemaError(
            f"non-binary node: {len(children)} children under {relation!r}"
        )
    left = _parse_tree(children[0], relation_map)
    right = _parse_tree(children[1], relation_map)
    return RstNode(relation, side, left, right)


def parse_tree(obj, relation_map: dict[str, str] | None = None) -> RstTree:
    if relation_map is None:
        relation_map = default_relation_map()
    return _parse_tree(obj, relation_map)


def load_rst(path, relation_map: dict[str, str] | None = None) -> dict:
    """Validated trees keyed by segment id."""
    if relation_map is None:
        relation_map = default_relation_map()
    trees = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                segment_id = rec["segment_id"]
                tree = _parse_tree(rec["tree"], relation_map)
            except (json.JSONDecodeError, KeyError) as exc:
                raise RstSchemaError(f"{path}:{lineno}: {exc}") from exc
            except RstSchemaError as exc:
                raise RstSchemaError(f"{path}:{lineno}: {exc}") from exc
            trees[segment_id] = tree
    return trees


def zero_discourse() -> np.ndarray:
    """Fallback vector when no tree is available for a segment."""
    return np.zeros(DISCOURSE_DIM)


def _leaf_roles(tree: RstTree):
    """Yield (leaf, role) pairs; the role comes from the edge to the parent,
    and a root leaf counts as a nucleus."""
    if isinstance(tree, RstLeaf):
        yield tree, "nucleus"
        return

    def walk(node: RstNode):
        for child, position in ((node.left, "left"), (node.right, "right")):
            if node.nucleus_side == "both" or node.nucleus_side == position:
                role = "nucleus"
            else:
                role = "satellite"
            if isinstance(child, RstLeaf):
                yield child, role
            else:
                yield from walk(child)

    yield from walk(tree)


def discourse_features(tree: RstTree | None, target_sentence_id: int) -> np.ndarray:
    """18 relation indicators plus (nucleus count, satellite count) for the
    target sentence's own EDUs."""
    features = zero_discourse()
    if tree is None:
        return features

    def mark_links(node: RstTree):
        if isinstance(node, RstLeaf):
            return
        left_ids = node.left.sentence_ids()
        right_ids = node.right.sentence_ids()
        target_left = target_sentence_id in left_ids
        target_right = target_sentence_id in right_ids
        links_other = (
            (target_left and right_ids - {target_sentence_id})
            or (target_right and left_ids - {target_sentence_id})
        )
        if links_other:
            features[_RELATION_INDEX[node.relation]] = 1.0
        mark_links(node.left)
        mark_links(node.right)

    mark_links(tree)

    nuclei = satellites = 0
    for leaf, role in _leaf_roles(tree):
        if leaf.sentence_id == target_sentence_id:
            if role == "nucleus":
                nuclei += 1
            else:
                satellites += 1
    features[18] = float(nuclei)
    features[19] = float(satellites)
    return features
