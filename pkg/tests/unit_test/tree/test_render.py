import numpy as np
import pytest
from deepdiff import DeepDiff

from motif_exposure.etc.enums import EstimatorKind
from motif_exposure.etc.errors import ArtifactNotFoundException
from motif_exposure.model.estimate import EstimateReport
from motif_exposure.model.exposure import BoxCondition, PositivityVerdict
from motif_exposure.model.motif import MotifSchema
from motif_exposure.model.tree import ExposureTree, TreeHyperparams, TreeNode
from motif_exposure.tree import leaf_table, read_tree_json, render_ascii, to_dot, write_tree_dot, \
    write_tree_json


def estimated_tree() -> ExposureTree:
    root_box = BoxCondition.everything(2, 'R')
    left_box, right_box = root_box.split(1, 0.25)
    verdict = PositivityVerdict(True, 0.0)
    left = TreeNode(left_box, 1, n_train=40, n_est=38,
                    estimate=EstimateReport('RL', EstimatorKind.HAJEK, 1.5, se=0.2,
                                            positivity=verdict))
    right = TreeNode(right_box, 1, n_train=60, n_est=62,
                     estimate=EstimateReport('RR', EstimatorKind.HAJEK, 4.0, se=0.3,
                                             positivity=verdict))
    root = TreeNode(root_box, 0, dim=1, theta=0.25, score=6.5, n_train=100, n_est=100,
                    left=left, right=right)

    return ExposureTree(root, MotifSchema.parse('Z,2-1'), TreeHyperparams(), 12)


class TestRender:
    def test_dot(self, tmp_path):
        dot = to_dot(estimated_tree())

        assert dot.startswith('digraph exposure_tree {')
        assert 'R -> RL [label="≤ 0.2500"];' in dot
        assert 'R -> RR [label="> 0.2500"];' in dot
        assert '4.000 ± 0.300' in dot

        write_tree_dot(estimated_tree(), tmp_path / 'tree.dot')
        assert (tmp_path / 'tree.dot').read_text(encoding='utf-8') == dot

    def test_ascii(self):
        lines = render_ascii(estimated_tree()).splitlines()

        assert lines[0] == '(R) split 2-1 at 0.2500, n_train=100'
        assert lines[1].startswith('    <= (RL) leaf, n_est=38')
        assert lines[2].startswith('    >  (RR) leaf')

    def test_leaf_table_sorted(self):
        table = leaf_table(estimated_tree())

        assert table['leaf'].tolist() == ['RR', 'RL']
        assert table['condition'].tolist() == ['2-1 > 0.2500', '2-1 <= 0.2500']
        assert table['positivity_ok'].tolist() == [True, True]


class TestTreeJson:
    def test_write_and_read(self, tmp_path):
        tree = estimated_tree()
        write_tree_json(tree, tmp_path / 'tree.json')

        loaded = read_tree_json(tmp_path / 'tree.json')

        assert not DeepDiff(loaded.to_dict(), tree.to_dict())
        assert loaded.assign_leaf(np.array([0.0, 0.3])) == 'RR'
        assert loaded.leaf('RL').estimate.point == 1.5

    def test_missing(self, tmp_path):
        with pytest.raises(ArtifactNotFoundException):
            read_tree_json(tmp_path / 'tree.json')
