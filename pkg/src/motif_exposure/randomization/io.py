import json
from pathlib import Path

import numpy as np
import pandas as pd

from motif_exposure.etc.errors import InputValidationException
from motif_exposure.graph.io import align_to_graph, NODE_ID_COLUMN
from motif_exposure.model.assignment import AssignmentVector, ClusterPartition
from motif_exposure.model.graph import Graph


def sidecar_path(path: str | Path) -> Path:
    """
    The JSON metadata file that accompanies a CSV artifact.
    """
    path = Path(path)

    return path.with_suffix('.json')


def write_assignment(g: Graph, assignment: AssignmentVector, path: str | Path):
    """
    Write an assignment as "node_id,z" CSV plus a sidecar JSON with its provenance.
    """
    frame = pd.DataFrame({NODE_ID_COLUMN: g.id_map, 'z': assignment.z.astype(int)})
    frame.to_csv(path, index=False, lineterminator='\n')

    with open(sidecar_path(path), 'w', encoding='utf-8') as file:
        json.dump(assignment.to_dict(), file, indent=2, sort_keys=True)


def read_assignment(g: Graph, path: str | Path) -> AssignmentVector:
    """
    Read an assignment CSV aligned to the graph.
    The sidecar JSON is optional; without it the provenance is "observed".
    """
    z = align_to_graph(g, path, 'z')
    if not np.isin(z, (0, 1)).all():
        raise InputValidationException('Assignment column z must hold only 0 and 1')

    design_tag, seed = 'observed', None
    sidecar = sidecar_path(path)
    if sidecar.exists():
        with open(sidecar, encoding='utf-8') as file:
            metadata = json.load(file)
        design_tag = metadata.get('designTag', design_tag)
        seed = metadata.get('seed')

    return AssignmentVector(z.astype(np.int8), design_tag, seed)


def write_partition(g: Graph, partition: ClusterPartition, path: str | Path):
    """
    Write a partition as "node_id,cluster" CSV.
    """
    frame = pd.DataFrame({NODE_ID_COLUMN: g.id_map, 'cluster': partition.cluster_of})
    frame.to_csv(path, index=False, lineterminator='\n')


def read_partition(g: Graph, path: str | Path) -> ClusterPartition:
    """
    Read a partition CSV aligned to the graph, relabelling clusters densely.
    """
    clusters = align_to_graph(g, path, 'cluster')
    _, cluster_of = np.unique(clusters, return_inverse=True)

    return ClusterPartition(cluster_of)
