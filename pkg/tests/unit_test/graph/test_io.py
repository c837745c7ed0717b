import io

import numpy as np
import pytest

from motif_exposure.etc.errors import GraphParsingException, InputValidationException, \
    SchemaException
from motif_exposure.graph.io import align_to_graph, load_edge_list, read_edge_list_text, \
    write_attributes, write_edge_list


class TestLoadEdgeList:
    def test_simple(self):
        g = read_edge_list_text('0 1\n1 2\n')

        assert g.node_count == 3
        assert g.edge_count == 2

    def test_comments_and_blank_lines(self):
        g = read_edge_list_text('# a comment\n\n0 1\n\n1 2\n')

        assert g.edge_count == 2

    def test_duplicates_counted(self):
        g = read_edge_list_text('0 1\n1 0\n1 1\n')

        assert g.node_count == 2
        assert g.edge_count == 1
        assert g.dropped_records == 2

    def test_malformed_line(self):
        with pytest.raises(GraphParsingException) as e:
            read_edge_list_text('0 1\n1 2 3\n')

        assert 'line 2' in e.value.message

    def test_numeric_ids_sorted(self):
        g = read_edge_list_text('10 2\n2 1\n')

        assert g.id_map == ['1', '2', '10']

    def test_string_ids(self):
        g = read_edge_list_text('alice bob\nbob carol\n')

        assert g.id_map == ['alice', 'bob', 'carol']
        assert g.degree(g.index_of['bob']) == 2


class TestAttributes:
    def test_attribute_only_ids_become_isolates(self):
        g = read_edge_list_text('0 1\n', 'node_id,group\n0,1\n1,0\n2,1\n')

        assert g.node_count == 3
        assert g.degree(2) == 0
        assert list(g.attribute('group')) == [1.0, 0.0, 1.0]

    def test_duplicate_ids(self):
        with pytest.raises(GraphParsingException):
            read_edge_list_text('0 1\n', 'node_id,group\n0,1\n0,0\n')

    def test_first_column(self):
        with pytest.raises(GraphParsingException):
            read_edge_list_text('0 1\n', 'group,node_id\n1,0\n0,1\n')

    def test_non_numeric_column(self):
        with pytest.raises(GraphParsingException):
            read_edge_list_text('0 1\n', 'node_id,group\n0,a\n1,b\n')

    def test_missing_column(self, path_graph):
        with pytest.raises(SchemaException):
            path_graph.attribute('group')


class TestWriteAndReload:
    def test_edge_list(self, tmp_path):
        g = read_edge_list_text('a b\nb c\n', 'node_id,group\na,1\nb,0\nc,1\nd,0\n')
        write_edge_list(g, tmp_path / 'edges.txt')
        write_attributes(g, tmp_path / 'attrs.csv')

        reloaded = load_edge_list(tmp_path / 'edges.txt', tmp_path / 'attrs.csv')

        assert reloaded.id_map == g.id_map
        assert (reloaded.edges() == g.edges()).all()
        assert list(reloaded.attribute('group')) == list(g.attribute('group'))


class TestAlignToGraph:
    def test_aligned(self, path_graph):
        values = align_to_graph(path_graph, io.StringIO('node_id,y\n2,3.5\n0,1.5\n1,2.5\n'), 'y')

        assert np.allclose(values, [1.5, 2.5, 3.5])

    def test_missing_ids(self, path_graph):
        with pytest.raises(InputValidationException) as e:
            align_to_graph(path_graph, io.StringIO('node_id,y\n0,1\n1,2\n'), 'y')

        assert 'missing: 2' in e.value.message

    def test_unknown_ids(self, path_graph):
        with pytest.raises(InputValidationException) as e:
            align_to_graph(path_graph, io.StringIO('node_id,y\n0,1\n1,2\n2,3\n7,4\n'), 'y')

        assert 'not in graph: 7' in e.value.message

    def test_missing_column(self, path_graph):
        with pytest.raises(InputValidationException):
            align_to_graph(path_graph, io.StringIO('node_id,z\n0,1\n1,0\n2,1\n'), 'y')
