import json

import numpy as np
import pytest

from factkit.discourse import (
    DISCOURSE_DIM,
    RELATIONS,
    RstLeaf,
    RstNode,
    RstSchemaError,
    discourse_features,
    load_rst,
    parse_tree,
    zero_discourse,
)


def leaf(sid, span=(0, 0)):
    return {"leaf": {"sentence_id": sid, "edu_span": list(span)}}


def node(relation, left, right, side="left"):
    return {"relation": relation, "nucleus_side": side, "children": [left, right]}


class TestParsing:
    def test_single_leaf(self):
        tree = parse_tree(leaf(1))
        assert isinstance(tree, RstLeaf)
        assert tree.sentence_ids() == {1}

    def test_elaboration_node(self):
        tree = parse_tree(node("Elaboration", leaf(1), leaf(2)))
        assert isinstance(tree, RstNode)
        assert tree.relation == "Elaboration"

    def test_unknown_relation(self):
        with pytest.raises(RstSchemaError, match="Foo"):
            parse_tree(node("Foo", leaf(1), leaf(2)))

    def test_fine_label_mapped(self):
        tree = parse_tree(node("Evidence", leaf(1), leaf(2)))
        assert tree.relation == "Explanation"

    def test_non_binary_rejected(self):
        bad = {"relation": "Joint", "nucleus_side": "both",
               "children": [leaf(1), leaf(2), leaf(3)]}
        with pytest.raises(RstSchemaError, match="non-binary"):
            parse_tree(bad)

    def test_bad_nucleus_side(self):
        bad = node("Contrast", leaf(1), leaf(2), side="middle")
        with pytest.raises(RstSchemaError, match="nucleus side"):
            parse_tree(bad)

    def test_load_rst_keyed_by_segment(self, tmp_path):
        p = tmp_path / "trees.jsonl"
        records = [
            {"segment_id": "d1:0", "tree": node("Contrast", leaf(1), leaf(2))},
            {"segment_id": "d1:1", "tree": leaf(3)},
        ]
        p.write_text("\n".join(json.dumps(r) for r in records))
        trees = load_rst(p)
        assert set(trees) == {"d1:0", "d1:1"}

    def test_load_rst_positioned_error(self, tmp_path):
        p = tmp_path / "trees.jsonl"
        p.write_text(json.dumps({"segment_id": "x", "tree": node("Foo", leaf(1), leaf(2))}))
        with pytest.raises(RstSchemaError, match=":1:"):
            load_rst(p)


class TestFeatures:
    def test_contrast_only_link(self):
        tree = parse_tree(node("Contrast", leaf(1), leaf(2)))
        feats = discourse_features(tree, 1)
        idx = RELATIONS.index("Contrast")
        assert feats[idx] == 1.0
        assert feats[:18].sum() == 1.0

    def test_single_edu_nucleus_counts(self):
        tree = parse_tree(node("Elaboration", leaf(1), leaf(2), side="left"))
        feats = discourse_features(tree, 1)
        assert (feats[18], feats[19]) == (1.0, 0.0)
        # sentence 2 hangs off the satellite edge
        feats2 = discourse_features(tree, 2)
        assert (feats2[18], feats2[19]) == (0.0, 1.0)

    def test_one_sentence_segment_no_indicators(self):
        tree = parse_tree(leaf(5))
        feats = discourse_features(tree, 5)
        assert feats[:18].sum() == 0.0
        assert (feats[18], feats[19]) == (1.0, 0.0)

    def test_multi_edu_sentence_internal_structure(self):
        # sentence 1 split into two EDUs joined by Elaboration, then linked
        # to sentence 2 by Contrast
        inner = node("Elaboration", leaf(1, (0, 4)), leaf(1, (4, 9)), side="left")
        tree = parse_tree(node("Contrast", inner, leaf(2), side="left"))
        feats = discourse_features(tree, 1)
        assert feats[RELATIONS.index("Contrast")] == 1.0
        # intra-sentence Elaboration links no other sentence
        assert feats[RELATIONS.index("Elaboration")] == 0.0
        assert (feats[18], feats[19]) == (1.0, 1.0)

    def test_target_absent_all_zero_indicators(self):
        tree = parse_tree(node("Cause", leaf(1), leaf(2)))
        feats = discourse_features(tree, 99)
        assert feats.sum() == 0.0

    def test_fallback_zero_vector(self):
        assert zero_discourse().shape == (DISCOURSE_DIM,)
        assert discourse_features(None, 1).sum() == 0.0

    def test_length_and_ranges(self):
        tree = parse_tree(
            node("Joint", node("Background", leaf(1), leaf(2), side="right"),
                 leaf(3), side="both")
        )
        for target in (1, 2, 3):
            feats = discourse_features(tree, target)
            assert feats.shape == (20,)
            assert set(np.unique(feats[:18])) <= {0.0, 1.0}
            assert feats[18] >= 0 and feats[19] >= 0
            assert feats[18] + feats[19] == 1.0  # each sentence is one EDU

    def test_relabeling_invariance(self):
        base = node("Contrast", node("Elaboration", leaf(1), leaf(2)), leaf(3))
        relabeled = node("Contrast", node("Elaboration", leaf(10), leaf(20)), leaf(30))
        f1 = discourse_features(parse_tree(base), 2)
        f2 = discourse_features(parse_tree(relabeled), 20)
        np.testing.assert_array_equal(f1, f2)

    def test_nuclei_satellites_sum_to_edu_count(self):
        # sentence 7 has three EDUs in a nested structure
        s7a = leaf(7, (0, 3))
        s7b = leaf(7, (3, 6))
        s7c = leaf(7, (6, 8))
        inner = node("Joint", s7a, s7b, side="both")
        sentence = node("Elaboration", inner, s7c, side="left")
        tree = parse_tree(node("Background", sentence, leaf(8), side="left"))
        feats = discourse_features(tree, 7)
        assert feats[18] + feats[19] == 3.0
