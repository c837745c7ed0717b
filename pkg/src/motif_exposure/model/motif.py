import re

import numpy as np

from motif_exposure.etc.consts import ANALYSIS_CONFIG
from motif_exposure.etc.enums import DimensionKind, Shape
from motif_exposure.etc.errors import SchemaException, ArgumentException


EGO_CODE = 'Z'
DEFAULT_ATTR_COLUMN = 'X'

_CODE_PATTERN = re.compile(
    r'^(?P<shape>2|3o|3c|4o)-(?P<treated>\d)'
    r'(?:\((?:(?P<column>[A-Za-z_]\w*)=)?(?P<value>[^()=]+)\))?$'
)


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


class MotifDimension:
    """
    One dimension of a causal-network-motif representation.
    """
    def __init__(self,
                 kind: DimensionKind,
                 shape: Shape = None,
                 treated_count: int = None,
                 *,
                 attr_column: str = None,
                 attr_value: float = None,
                 ):
        """
        One dimension of a causal-network-motif representation.
        :param kind: Ego treatment, motif fraction or attribute-conditioned dyad fraction
        :param shape: The motif shape, for motif and attribute dimensions
        :param treated_count: Number of treated non-ego members the dimension counts
        :param attr_column: Attribute column the neighbors are conditioned on
        :param attr_value: Attribute value the neighbors must hold
        """
        if kind != DimensionKind.EGO:
            if shape is None or treated_count is None:
                raise SchemaException('Motif dimensions need a shape and a treated count')
            if not 0 <= treated_count <= shape.arity:
                raise SchemaException(
                    f'Shape {shape.value} has {shape.arity} non-ego members, '
                    f'cannot count {treated_count} treated'
                )
        if kind == DimensionKind.ATTRIBUTE:
            if shape != Shape.DYAD:
                raise SchemaException('Attribute-conditioned dimensions are defined on dyads only')
            if attr_column is None or attr_value is None:
                raise SchemaException('Attribute-conditioned dimensions need a column and value')

        self.kind = kind
        self.shape = shape
        self.treated_count = treated_count
        self.attr_column = attr_column
        self.attr_value = float(attr_value) if attr_value is not None else None

    @classmethod
    def ego(cls) -> 'MotifDimension':
        return cls(DimensionKind.EGO)

    @classmethod
    def motif(cls, shape: Shape, treated_count: int) -> 'MotifDimension':
        return cls(DimensionKind.MOTIF, shape, treated_count)

    @classmethod
    def attribute(cls,
                  treated_count: int,
                  attr_value: float,
                  attr_column: str = DEFAULT_ATTR_COLUMN,
                  ) -> 'MotifDimension':
        return cls(
            DimensionKind.ATTRIBUTE,
            Shape.DYAD,
            treated_count,
            attr_column=attr_column,
            attr_value=attr_value,
        )

    @classmethod
    def parse(cls, code: str) -> 'MotifDimension':
        """
        Parse a dimension code such as Z, 2-1, 3c-2, 4o-0, 2-1(1) or 2-1(group=3).
        """
        code = code.strip()
        if code == EGO_CODE:
            return cls.ego()

        match = _CODE_PATTERN.match(code)
        if match is None:
            raise SchemaException(f'Unknown motif dimension code: {code!r}')

        shape = Shape(match['shape'])
        treated = int(match['treated'])
        if match['value'] is None:
            return cls.motif(shape, treated)
        if shape != Shape.DYAD:
            raise SchemaException(
                f'Attribute conditions are defined on dyads only, got {code!r}'
            )

        try:
            value = float(match['value'])
        except ValueError as e:
            raise SchemaException(f'Attribute value in {code!r} is not numeric') from e

        return cls.attribute(treated, value, match['column'] or DEFAULT_ATTR_COLUMN)

    @property
    def code(self) -> str:
        if self.kind == DimensionKind.EGO:
            return EGO_CODE

        base = f'{self.shape.value}-{self.treated_count}'
        if self.kind == DimensionKind.MOTIF:
            return base

        value = _format_value(self.attr_value)
        if self.attr_column == DEFAULT_ATTR_COLUMN:
            return f'{base}({value})'

        return f'{base}({self.attr_column}={value})'

    @property
    def is_full_treatment(self) -> bool:
        """
        Whether the dimension counts motifs with every non-ego member treated.
        """
        return self.kind != DimensionKind.EGO and self.treated_count == self.shape.arity

    @property
    def is_full_control(self) -> bool:
        return self.kind != DimensionKind.EGO and self.treated_count == 0

    def __eq__(self, other):
        return isinstance(other, MotifDimension) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f'MotifDimension({self.code})'


class MotifSchema:
    def __init__(self, dims: list[MotifDimension]):
        """
        Ordered dimensions of a representation. The first is always the ego treatment.
        :param dims: The dimensions, at least two, all distinct
        """
        dims = list(dims)
        if len(dims) < 2:
            raise SchemaException(
                'A schema needs the ego treatment and at least one motif dimension'
            )
        if dims[0].kind != DimensionKind.EGO:
            raise SchemaException('The first schema dimension must be the ego treatment Z')
        if any(dim.kind == DimensionKind.EGO for dim in dims[1:]):
            raise SchemaException('Only the first schema dimension may be the ego treatment')
        if len(set(dims)) != len(dims):
            raise SchemaException('Schema dimensions must be unique')

        self.dims = dims

    @classmethod
    def parse(cls, text: str | list[str]) -> 'MotifSchema':
        """
        Parse a comma list of dimension codes. Z is prepended when missing.
        """
        codes = [c for c in (text.split(',') if isinstance(text, str) else text) if c.strip()]
        dims = [MotifDimension.parse(code) for code in codes]
        if not dims or dims[0].kind != DimensionKind.EGO:
            dims.insert(0, MotifDimension.ego())

        return cls(dims)

    @property
    def M(self) -> int:     # pylint: disable=invalid-name
        return len(self.dims)

    @property
    def codes(self) -> list[str]:
        return [dim.code for dim in self.dims]

    def index(self, code: str) -> int:
        """
        Position of a dimension code in the schema.
        """
        target = MotifDimension.parse(code)
        for m, dim in enumerate(self.dims):
            if dim == target:
                return m

        raise SchemaException(f'Dimension {code} not in schema {",".join(self.codes)}')

    def shapes(self) -> set[Shape]:
        return {dim.shape for dim in self.dims[1:] if dim.kind == DimensionKind.MOTIF}

    def attr_columns(self) -> set[str]:
        return {dim.attr_column for dim in self.dims if dim.kind == DimensionKind.ATTRIBUTE}

    def restricted(self, codes: list[str]) -> 'MotifSchema':
        """
        A sub-schema keeping the given codes in this schema's order.
        """
        wanted = {MotifDimension.parse(code) for code in codes}

        return MotifSchema([dim for dim in self.dims if dim in wanted])

    def to_dict(self) -> dict:
        return {'dims': self.codes}

    @classmethod
    def from_dict(cls, payload: dict) -> 'MotifSchema':
        return cls.parse(payload['dims'])

    def __eq__(self, other):
        return isinstance(other, MotifSchema) and self.codes == other.codes

    def __hash__(self):
        return hash(tuple(self.codes))

    def __repr__(self):
        return f'MotifSchema({",".join(self.codes)})'


def default_schema() -> MotifSchema:
    """
    Ego treatment, dyads, open and closed triads, open 4-stars and
    covariate-conditioned dyads.
    """
    return MotifSchema.parse('Z,2-1,3o-0,3o-2,3c-0,3c-2,4o-0,4o-3,2-1(1),2-1(0)')


def fractional_q_schema() -> MotifSchema:
    """
    Ego treatment and treated-neighbor fraction only.
    """
    return MotifSchema.parse('Z,2-1')


class SamplingConfig:
    def __init__(self,
                 max_exact_degree: int = None,
                 sample_size: int = None,
                 seed: int = 0,
                 ):
        """
        Neighbor sampling for high-degree egos.
        :param max_exact_degree: Egos above this degree are counted on a neighbor sample
        :param sample_size: Number of neighbors sampled for such egos
        :param seed: Seed of the per-node samples
        """
        self.max_exact_degree = max_exact_degree if max_exact_degree is not None \
            else ANALYSIS_CONFIG.max_exact_degree
        self.sample_size = sample_size if sample_size is not None \
            else ANALYSIS_CONFIG.neighbor_sample_size
        self.seed = seed

        if self.max_exact_degree < 2:
            raise ArgumentException('max_exact_degree must be at least 2')
        if self.sample_size < 1:
            raise ArgumentException('sample_size must be at least 1')

    def to_dict(self) -> dict:
        return {
            'maxExactDegree': self.max_exact_degree,
            'sampleSize': self.sample_size,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'SamplingConfig':
        return cls(
            max_exact_degree=payload['maxExactDegree'],
            sample_size=payload['sampleSize'],
            seed=payload.get('seed', 0),
        )


class MotifCounts:
    def __init__(self,
                 node: int,
                 totals: dict[Shape, int],
                 causal: dict[tuple[Shape, int], int],
                 *,
                 attr_totals: dict[tuple[str, float], int] = None,
                 attr_causal: dict[tuple[str, float, int], int] = None,
                 sampled: bool = False,
                 ):
        """
        Motif and causal motif counts around one ego.
        :param node: The ego node index
        :param totals: Number of motif instances per shape
        :param causal: Number of instances per (shape, treated non-ego members)
        :param attr_totals: Neighbors holding (column, value)
        :param attr_causal: Such neighbors per (column, value, treated)
        :param sampled: Whether the counts were taken on a neighbor sample
        """
        self.node = node
        self.totals = totals
        self.causal = causal
        self.attr_totals = attr_totals or {}
        self.attr_causal = attr_causal or {}
        self.sampled = sampled

    def total(self, dim: MotifDimension) -> int:
        """
        Denominator count of a representation dimension.
        """
        if dim.kind == DimensionKind.ATTRIBUTE:
            return self.attr_totals[(dim.attr_column, dim.attr_value)]

        return self.totals[dim.shape]

    def count(self, dim: MotifDimension) -> int:
        """
        Numerator count of a representation dimension.
        """
        if dim.kind == DimensionKind.ATTRIBUTE:
            return self.attr_causal[(dim.attr_column, dim.attr_value, dim.treated_count)]

        return self.causal[(dim.shape, dim.treated_count)]


class RepresentationMatrix:
    def __init__(self,
                 R: np.ndarray,        # pylint: disable=invalid-name
                 U: np.ndarray,        # pylint: disable=invalid-name
                 schema: MotifSchema,
                 seed: int | None,
                 *,
                 sampling: SamplingConfig = None,
                 ):
        """
        Per-unit causal-network-motif representations.
        :param R: N x M matrix, column 0 the ego treatment
        :param U: N x (M-1) smoothing draws used to build the motif columns
        :param schema: The dimension schema
        :param seed: Seed of the smoothing draws
        :param sampling: The neighbor sampling configuration used for counting
        """
        if R.ndim != 2 or R.shape[1] != schema.M:
            raise SchemaException(
                f'Representation has shape {R.shape}, schema has {schema.M} dimensions'
            )

        self.R = R
        self.U = U
        self.schema = schema
        self.seed = seed
        self.sampling = sampling or SamplingConfig()

    @property
    def node_count(self) -> int:
        return self.R.shape[0]

    def restricted(self, codes: list[str]) -> 'RepresentationMatrix':
        """
        The representation on a sub-schema, sharing the same draws.
        """
        schema = self.schema.restricted(codes)
        columns = [self.schema.index(code) for code in schema.codes]

        return RepresentationMatrix(
            self.R[:, columns],
            self.U[:, [c - 1 for c in columns[1:]]],
            schema,
            self.seed,
            sampling=self.sampling,
        )

    def metadata(self) -> dict:
        return {
            'schema': self.schema.to_dict(),
            'seed': self.seed,
            'sampling': self.sampling.to_dict(),
            'nodeCount': self.node_count,
        }


class ReferenceRepresentations:
    def __init__(self,
                 r1: np.ndarray,
                 r0: np.ndarray,
                 schema: MotifSchema,
                 ):
        """
        Representations of the all-treated and all-control worlds.
        :param r1: Length-M vector under global treatment
        :param r0: Length-M vector under global control
        :param schema: The dimension schema
        """
        self.r1 = r1
        self.r0 = r0
        self.schema = schema

    def to_dict(self) -> dict:
        return {
            'schema': self.schema.codes,
            'r1': self.r1.tolist(),
            'r0': self.r0.tolist(),
        }
