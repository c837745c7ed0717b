import io
from pathlib import Path
from typing import TextIO

import numpy as np
import pandas as pd

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import GraphParsingException, InputValidationException
from motif_exposure.model.graph import Graph
from .core import node_sort_key


NODE_ID_COLUMN = 'node_id'


def _open_text(source: str | Path | TextIO) -> tuple[TextIO, bool]:
    if isinstance(source, (str, Path)):
        return open(source, encoding='utf-8'), True

    return source, False


def _parse_edge_lines(stream: TextIO) -> list[tuple[str, str]]:
    pairs = []
    malformed = []

    for line_number, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue

        tokens = stripped.split()
        if len(tokens) != 2:
            malformed.append(line_number)
            continue

        pairs.append((tokens[0], tokens[1]))

    if malformed:
        shown = ', '.join(str(n) for n in malformed[:10])
        raise GraphParsingException(
            f'Malformed edge line(s) at line {shown}: expected two node ids'
            + (f' ({len(malformed)} in total)' if len(malformed) > 10 else '')
        )

    return pairs


def _parse_attribute_table(source: str | Path | TextIO) -> pd.DataFrame:
    try:
        table = pd.read_csv(source, dtype={NODE_ID_COLUMN: str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise GraphParsingException(f'Cannot parse attribute table: {e}') from e

    if len(table.columns) == 0 or table.columns[0] != NODE_ID_COLUMN:
        raise GraphParsingException(
            f'Attribute table must start with a {NODE_ID_COLUMN} column'
        )

    ids = table[NODE_ID_COLUMN]
    unresolvable = table.index[ids.isna() | (ids.str.strip() == '')].tolist()
    duplicated = ids[ids.duplicated(keep=False) & ids.notna()].unique().tolist()
    if unresolvable or duplicated:
        offenders = [f'row {row + 2}' for row in unresolvable] + duplicated
        raise GraphParsingException(
            f'Attribute ids cannot be resolved: {", ".join(str(o) for o in offenders)}'
        )

    table[NODE_ID_COLUMN] = ids.str.strip()
    for column in table.columns[1:]:
        try:
            table[column] = pd.to_numeric(table[column])
        except (ValueError, TypeError) as e:
            raise GraphParsingException(
                f'Attribute column {column} is not numeric'
            ) from e

    return table.set_index(NODE_ID_COLUMN)


def load_edge_list(source: str | Path | TextIO,
                   attr_source: str | Path | TextIO = None,
                   ) -> Graph:
    """
    Load a graph from an edge-list text and an optional attribute table.

    Node ids are reindexed densely in sorted order (numerically when every id
    is an integer). Duplicate edges and self-loops are dropped and counted.
    Nodes that only appear in the attribute table become isolates.
    :param source: Edge-list path or text stream, one "u v" pair per line
    :param attr_source: Optional CSV path or stream whose first column is node_id
    :return: The loaded graph
    """
    stream, owned = _open_text(source)
    try:
        pairs = _parse_edge_lines(stream)
    finally:
        if owned:
            stream.close()

    attr_table = _parse_attribute_table(attr_source) if attr_source is not None else None

    labels = {u for pair in pairs for u in pair}
    if attr_table is not None:
        labels.update(attr_table.index)
    id_map = sorted(labels, key=node_sort_key)
    index = {label: i for i, label in enumerate(id_map)}

    edges = np.array([(index[u], index[v]) for u, v in pairs], dtype=np.int64).reshape(-1, 2)

    attrs = None
    if attr_table is not None:
        attrs = attr_table.reindex(id_map).reset_index(drop=True)
        missing = int(attrs.isna().all(axis=1).sum()) if len(attrs.columns) else 0
        if missing:
            LOGGER.warning('%d nodes have no attribute row', missing)

    g = Graph.from_edges(edges, len(id_map), attrs=attrs, id_map=id_map)

    LOGGER.info(
        'Loaded graph with %d nodes and %d edges, dropped %d duplicate or self-loop records',
        g.node_count,
        g.edge_count,
        g.dropped_records,
    )

    return g


def write_edge_list(g: Graph,
                    sink: str | Path | TextIO,
                    ):
    """
    Write a graph as edge-list text using its external ids.
    :param g: The graph
    :param sink: Path or text stream to write into
    """
    stream, owned = (open(sink, 'w', encoding='utf-8'), True) \
        if isinstance(sink, (str, Path)) else (sink, False)

    try:
        stream.write(f'# nodes: {g.node_count} edges: {g.edge_count}\n')
        for u, v in g.edges():
            stream.write(f'{g.id_map[u]}\t{g.id_map[v]}\n')
    finally:
        if owned:
            stream.close()


def write_attributes(g: Graph,
                     sink: str | Path | TextIO,
                     ):
    """
    Write the attribute table as CSV keyed by external node id.
    Every node gets a row, so isolates survive a reload.
    """
    table = g.attrs.copy()
    table.insert(0, NODE_ID_COLUMN, g.id_map)
    table.to_csv(sink, index=False)


def align_to_graph(g: Graph,
                   source: str | Path | TextIO,
                   column: str,
                   ) -> np.ndarray:
    """
    Read a per-node CSV and align one of its columns to the graph's index order.
    :param g: The graph
    :param source: CSV path or stream with a node_id column
    :param column: The value column to align
    :return: Values in dense index order
    """
    try:
        table = pd.read_csv(source, dtype={NODE_ID_COLUMN: str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputValidationException(f'Cannot parse {column} table: {e}') from e

    if NODE_ID_COLUMN not in table.columns or column not in table.columns:
        raise InputValidationException(
            f'Table must have {NODE_ID_COLUMN} and {column} columns'
        )

    table[NODE_ID_COLUMN] = table[NODE_ID_COLUMN].str.strip()
    known = set(g.id_map)
    provided = set(table[NODE_ID_COLUMN])
    unknown = sorted(provided - known, key=node_sort_key)
    missing = sorted(known - provided, key=node_sort_key)

    if unknown or missing or table[NODE_ID_COLUMN].duplicated().any():
        details = []
        if unknown:
            details.append(f'not in graph: {", ".join(unknown[:10])}')
        if missing:
            details.append(f'missing: {", ".join(missing[:10])}')
        if table[NODE_ID_COLUMN].duplicated().any():
            details.append('duplicated ids present')
        raise InputValidationException(
            f'{column} table does not align with the graph ({"; ".join(details)})'
        )

    values = table.set_index(NODE_ID_COLUMN)[column].reindex(g.id_map)

    return values.to_numpy(dtype=np.float64)


def read_edge_list_text(text: str, attr_text: str = None) -> Graph:
    """
    Convenience wrapper around load_edge_list for in-memory text.
    """
    return load_edge_list(
        io.StringIO(text),
        io.StringIO(attr_text) if attr_text is not None else None,
    )
