import json
from pathlib import Path

import numpy as np
import pandas as pd

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.errors import SchemaException, InputValidationException
from motif_exposure.graph.io import NODE_ID_COLUMN
from motif_exposure.model.assignment import AssignmentVector
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema, SamplingConfig, RepresentationMatrix, \
    ReferenceRepresentations
from .census import MotifCensus
from .counting import as_treatment


# Smallest positive double, so the draws lie strictly inside (0, 1).
_LOWEST_UNIFORM = np.nextafter(0.0, 1.0)


def draw_uniforms(node_count: int, columns: int, seed: int) -> np.ndarray:
    """
    Smoothing draws U for a representation, i.i.d. uniform on the open unit interval.
    """
    rng = np.random.default_rng(seed)

    return rng.uniform(_LOWEST_UNIFORM, 1.0, size=(node_count, columns))


def check_schema(g: Graph, schema: MotifSchema):
    """
    Fail when the schema references attribute columns the graph does not have.
    """
    missing = sorted(column for column in schema.attr_columns() if column not in g.attrs.columns)
    if missing:
        raise SchemaException(
            f'Schema references missing attribute column(s): {", ".join(missing)}'
        )


def build_representation_matrix(g: Graph,
                                z: AssignmentVector | np.ndarray,
                                schema: MotifSchema,
                                seed: int,
                                sampling: SamplingConfig = None,
                                *,
                                census: MotifCensus = None,
                                uniforms: np.ndarray = None,
                                ) -> RepresentationMatrix:
    """
    Build the causal-network-motif representation of every unit.

    Column 0 is the ego treatment. Every other column m holds
    (causal motif count + U_im) / (motif count + 1).
    :param g: The graph
    :param z: The assignment
    :param schema: The representation schema
    :param seed: Seed of the smoothing draws U
    :param sampling: Neighbor sampling for high-degree egos
    :param census: A census already built for (g, schema, sampling)
    :param uniforms: Pinned smoothing draws, overriding the seed
    :return: The representation matrix
    """
    check_schema(g, schema)
    z = as_treatment(z, g.node_count)

    if census is None:
        census = MotifCensus(g, schema, sampling)
    elif census.schema != schema:
        raise SchemaException('Census was built for a different schema')

    if uniforms is None:
        uniforms = draw_uniforms(g.node_count, schema.M - 1, seed)
    elif uniforms.shape != (g.node_count, schema.M - 1):
        raise SchemaException(
            f'Smoothing draws have shape {uniforms.shape}, '
            f'expected {(g.node_count, schema.M - 1)}'
        )

    R = census.representation(z, uniforms)      # pylint: disable=invalid-name

    return RepresentationMatrix(R, uniforms, schema, seed, sampling=census.sampling)


def reference_uniforms(schema: MotifSchema, treated: bool) -> np.ndarray:
    """
    Pinned smoothing draws under which every unit maps to the reference representation.
    :param schema: The representation schema
    :param treated: True for the all-treated world, False for the all-control world
    :return: Length M-1 vector of 0/1 draws
    """
    values = []
    for dim in schema.dims[1:]:
        if dim.is_full_treatment:
            values.append(1.0 if treated else 0.0)
        elif dim.is_full_control:
            values.append(0.0 if treated else 1.0)
        else:
            raise SchemaException(
                f'Dimension {dim.code} counts a mixed treatment pattern and has no reference '
                'value; drop it from the schema used for gate estimation'
            )

    return np.array(values)


def reference_representations(schema: MotifSchema) -> ReferenceRepresentations:
    """
    Representations of the all-treated and all-control worlds, identical for every unit.
    :param schema: The representation schema
    :return: The pair (r1, r0)
    """
    r1 = np.concatenate([[1.0], reference_uniforms(schema, treated=True)])
    r0 = np.concatenate([[0.0], reference_uniforms(schema, treated=False)])

    return ReferenceRepresentations(r1, r0, schema)


def write_representations(g: Graph, reps: RepresentationMatrix, path: str | Path):
    """
    Write a representation matrix as "node_id,<codes>" CSV plus a sidecar JSON.
    """
    frame = pd.DataFrame(reps.R, columns=reps.schema.codes)
    frame.insert(0, NODE_ID_COLUMN, g.id_map)
    frame.to_csv(path, index=False, lineterminator='\n')

    with open(Path(path).with_suffix('.json'), 'w', encoding='utf-8') as file:
        json.dump(reps.metadata(), file, indent=2, sort_keys=True)


def read_representations(g: Graph, path: str | Path) -> RepresentationMatrix:
    """
    Read a representation CSV and its sidecar. The smoothing draws are
    regenerated from the recorded seed.
    """
    with open(Path(path).with_suffix('.json'), encoding='utf-8') as file:
        metadata = json.load(file)

    schema = MotifSchema.from_dict(metadata['schema'])
    frame = pd.read_csv(path, dtype={NODE_ID_COLUMN: str})
    if list(frame.columns[1:]) != schema.codes:
        raise InputValidationException('Representation columns do not match the sidecar schema')
    if list(frame[NODE_ID_COLUMN]) != g.id_map:
        raise InputValidationException('Representation rows do not match the graph nodes')

    seed = metadata['seed']
    uniforms = draw_uniforms(g.node_count, schema.M - 1, seed) if seed is not None \
        else np.full((g.node_count, schema.M - 1), np.nan)

    LOGGER.debug('Read representations for %d nodes from %s', g.node_count, path)

    return RepresentationMatrix(
        frame[schema.codes].to_numpy(dtype=np.float64),
        uniforms,
        schema,
        seed,
        sampling=SamplingConfig.from_dict(metadata['sampling']),
    )

