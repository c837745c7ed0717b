import numpy as np

from motif_exposure.etc.consts import LOGGER, ANALYSIS_CONFIG
from motif_exposure.etc.enums import DesignKind
from motif_exposure.etc.errors import ArgumentException, InferenceException
from motif_exposure.etc.utils import counter_rng, counter_seed, parallel_map
from motif_exposure.graph.core import ego_members
from motif_exposure.model.assignment import RandomizationDesign
from motif_exposure.model.estimate import FocalSet, InferenceResult
from motif_exposure.model.exposure import ExposureCondition, BoxCondition
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import RepresentationMatrix
from motif_exposure.motif.census import MotifCensus
from motif_exposure.motif.counting import as_treatment
from motif_exposure.motif.representation import draw_uniforms


def check_disjoint(condition_a: ExposureCondition,
                   condition_b: ExposureCondition,
                   R: np.ndarray,       # pylint: disable=invalid-name
                   ):
    """
    Fail when two conditions overlap, as boxes or on the observed representations.
    """
    if isinstance(condition_a, BoxCondition) and isinstance(condition_b, BoxCondition):
        if not condition_a.intersection(condition_b).is_empty:
            raise ArgumentException(
                f'Conditions {condition_a.label} and {condition_b.label} overlap'
            )

    both = condition_a.members(R) & condition_b.members(R)
    if both.any():
        raise ArgumentException(
            f'{int(both.sum())} units lie in both {condition_a.label} and {condition_b.label}'
        )


def build_focal_set(g: Graph,
                    member_a: np.ndarray,
                    member_b: np.ndarray,
                    probs_a: np.ndarray,
                    probs_b: np.ndarray,
                    hop: int,
                    labels: tuple[str, str] = ('a', 'b'),
                    ) -> FocalSet:
    """
    Greedy focal set in descending node id order.

    A unit qualifies when it is observed in one of the two conditions and has a
    positive probability of both. It is taken when its n-hop ego network shares
    no node with the ego network of a unit already taken.
    :param g: The graph
    :param member_a: Observed membership of the first condition
    :param member_b: Observed membership of the second condition
    :param probs_a: Exposure probabilities of the first condition
    :param probs_b: Exposure probabilities of the second condition
    :param hop: The interference hop count, at least 1
    :param labels: Labels of the two conditions
    :return: The focal set
    """
    if hop < 1:
        raise ArgumentException(f'Hop count must be at least 1, got {hop}')

    eligible = (member_a | member_b) & (probs_a > 0) & (probs_b > 0)
    claimed = np.zeros(g.node_count, dtype=bool)
    units = []

    for i in np.flatnonzero(eligible)[::-1]:
        members = ego_members(g, int(i), hop)
        if claimed[members].any():
            continue
        claimed[members] = True
        units.append(int(i))

    if not units:
        raise InferenceException('No non-overlapping focal units')

    LOGGER.debug('Focal set of %d units out of %d eligible', len(units), int(eligible.sum()))

    return FocalSet(np.sort(np.asarray(units, dtype=np.int64)), hop, labels)


def focal_statistic(y: np.ndarray,
                    in_a: np.ndarray,
                    in_b: np.ndarray,
                    probs_a: np.ndarray,
                    probs_b: np.ndarray,
                    ) -> float:
    """
    Absolute difference of the inverse-probability weighted outcome sums of
    the two conditions over the focal units. All arguments are focal-aligned.
    """
    return float(abs(np.sum(y * (in_a / probs_a - in_b / probs_b))))


class FocalRerandomizer:
    """
    Draws assignments that re-randomize only the focal ego networks, by
    rejection per focal unit until its representation lies in one of the two
    conditions.

    Under a cluster design every cluster touching a pending ego network is
    redrawn as a whole, so treatment stays constant within clusters. Focal
    units whose ego networks share such a cluster are tested again.
    """
    def __init__(self,
                 g: Graph,
                 design: RandomizationDesign,
                 z_obs: np.ndarray,
                 census: MotifCensus,
                 focal_set: FocalSet,
                 conditions: tuple[ExposureCondition, ExposureCondition],
                 max_attempts: int = None,
                 ):
        self.graph = g
        self.design = design
        self.z_obs = z_obs
        self.census = census
        self.focal_set = focal_set
        self.conditions = conditions
        self.max_attempts = max_attempts or ANALYSIS_CONFIG.focal_max_attempts
        self.ego_nets = [ego_members(g, int(i), focal_set.hop) for i in focal_set.units]

    def _redraw(self,
                z: np.ndarray,
                pending: np.ndarray,
                rng: np.random.Generator,
                ) -> np.ndarray:
        """
        Redraw the pending ego networks in place.
        :return: Focal positions whose ego networks saw a redrawn node
        """
        nodes = np.concatenate([self.ego_nets[f] for f in pending])

        if self.design.kind != DesignKind.CLUSTER:
            z[nodes] = rng.random(len(nodes)) < self.design.p
            return pending

        cluster_of = self.design.partition.cluster_of
        clusters = np.unique(cluster_of[nodes])
        treated = rng.random(len(clusters)) < self.design.p
        nodes = np.flatnonzero(np.isin(cluster_of, clusters))
        z[nodes] = treated[np.searchsorted(clusters, cluster_of[nodes])]

        redrawn = np.zeros(len(z), dtype=bool)
        redrawn[nodes] = True

        return np.flatnonzero([redrawn[net].any() for net in self.ego_nets])

    def draw(self, seed: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Focal memberships under re-randomization b.
        :return: (in_a, in_b), focal-aligned boolean vectors
        """
        _, in_a, in_b = self.sample(seed, b)

        return in_a, in_b

    def sample(self, seed: int, b: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Re-randomization b with the focal memberships it produced.
        :return: (z, in_a, in_b), the assignment and focal-aligned boolean vectors
        """
        rng = counter_rng(seed, b)
        z = self.z_obs.copy()
        units = self.focal_set.units
        in_a = np.zeros(len(units), dtype=bool)
        in_b = np.zeros(len(units), dtype=bool)
        pending = np.arange(len(units))

        for attempt in range(self.max_attempts):
            touched = self._redraw(z, pending, rng)
            uniforms = draw_uniforms(
                self.graph.node_count,
                self.census.schema.M - 1,
                counter_seed(seed, b, attempt),
            )
            R = self.census.representation(z, uniforms)     # pylint: disable=invalid-name
            hit_a = self.conditions[0].members(R)[units[touched]]
            hit_b = self.conditions[1].members(R)[units[touched]]

            in_a[touched] = hit_a
            in_b[touched] = hit_b
            pending = touched[~(hit_a | hit_b)]
            if len(pending) == 0:
                return z, in_a, in_b

        raise InferenceException(
            f'Focal unit {int(units[pending[0]])} did not reach either condition '
            f'in {self.max_attempts} attempts'
        )


def exact_p_value(g: Graph,
                  design: RandomizationDesign,
                  z_obs: np.ndarray,
                  y_obs: np.ndarray,
                  condition_a: ExposureCondition,
                  condition_b: ExposureCondition,
                  hop: int,
                  B: int,       # pylint: disable=invalid-name
                  seed: int,
                  *,
                  reps: RepresentationMatrix,
                  probs_a: np.ndarray,
                  probs_b: np.ndarray,
                  census: MotifCensus = None,
                  threads: int = None,
                  ) -> InferenceResult:
    """
    Randomization p-value of the sharp null that outcomes do not differ
    between two conditions.

    Assignments are re-drawn only inside the focal ego networks, restricted to
    draws that keep every focal unit in one of the two conditions. Under the
    null the focal outcomes stay at their observed values.
    p = (1 + #{T_b >= T_obs}) / (B + 1).
    :param g: The graph
    :param design: The randomization design of the experiment
    :param z_obs: Observed assignment
    :param y_obs: Observed outcomes
    :param condition_a: First condition
    :param condition_b: Second condition, disjoint from the first
    :param hop: The interference hop count
    :param B: Number of re-randomizations
    :param seed: Seed of the re-randomizations
    :param reps: Observed representations
    :param probs_a: Exposure probabilities of the first condition
    :param probs_b: Exposure probabilities of the second condition
    :param census: A census of the representation schema
    :param threads: Upper bound on worker threads
    :return: The p-value with its statistic and focal set
    """
    if B < 1:
        raise ArgumentException(f'Need at least one re-randomization, got {B}')

    z_obs = as_treatment(z_obs, g.node_count)
    y_obs = np.asarray(y_obs, dtype=np.float64)
    probs_a = np.asarray(probs_a, dtype=np.float64)
    probs_b = np.asarray(probs_b, dtype=np.float64)
    check_disjoint(condition_a, condition_b, reps.R)

    member_a = condition_a.members(reps.R)
    member_b = condition_b.members(reps.R)
    focal_set = build_focal_set(g, member_a, member_b, probs_a, probs_b, hop,
                                (condition_a.label, condition_b.label))
    units = focal_set.units

    y_focal = y_obs[units]
    p_a = probs_a[units]
    p_b = probs_b[units]
    observed = focal_statistic(y_focal, member_a[units], member_b[units], p_a, p_b)

    census = census or MotifCensus(g, reps.schema, reps.sampling)
    rerandomizer = FocalRerandomizer(g, design, z_obs, census, focal_set,
                                     (condition_a, condition_b))

    def statistic(b: int) -> float:
        in_a, in_b = rerandomizer.draw(seed, b)
        return focal_statistic(y_focal, in_a, in_b, p_a, p_b)

    draws = np.asarray(parallel_map(statistic, range(B), threads), dtype=np.float64)

    tolerance = 1e-12 * max(1.0, observed)
    p_value = (1.0 + float(np.sum(draws >= observed - tolerance))) / (B + 1.0)

    LOGGER.info(
        'Randomization test over %d focal units: T=%.4f, p=%.4f',
        len(focal_set),
        observed,
        p_value,
    )

    return InferenceResult(p_value, observed, focal_set, draws, seed)
