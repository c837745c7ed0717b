import hashlib

from motif_exposure.etc.errors import ArgumentException, PositivityException, \
    SelectionException, ArtifactNotFoundException, EXIT_INTERNAL, EXIT_POSITIVITY, \
    EXIT_VALIDATION
from motif_exposure.etc.utils import counter_seed, derive_seed, exception_handler, file_digest, \
    parallel_map


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, 'analysis', 'bootstrap') == derive_seed(7, 'analysis', 'bootstrap')

    def test_labels_separate_streams(self):
        seeds = {derive_seed(7, 'analysis', label) for label in ('a', 'b', 'c')}

        assert len(seeds) == 3
        assert derive_seed(7, 'x') != derive_seed(8, 'x')

    def test_range(self):
        for master in range(50):
            seed = derive_seed(master, 'synth', 'network')
            assert 0 <= seed < 2 ** 63


class TestCounterSeed:
    def test_depends_only_on_counters(self):
        forward = [counter_seed(3, b, 0) for b in range(5)]
        backward = [counter_seed(3, b, 0) for b in reversed(range(5))]

        assert forward == backward[::-1]
        assert len(set(forward)) == 5


class TestParallelMap:
    def test_keeps_order(self):
        items = list(range(40))

        assert parallel_map(lambda x: x * x, items, threads=4) == [x * x for x in items]

    def test_single_thread(self):
        assert parallel_map(str, [1, 2], threads=1) == ['1', '2']


class TestExceptionHandler:
    def test_success_returns_zero(self):
        assert exception_handler(lambda: None)() == 0

    def test_toolkit_exception_exit_code(self):
        def fail():
            raise ArgumentException('bad argument')

        assert exception_handler(fail)() == EXIT_VALIDATION

    def test_positivity_exit_code(self):
        def fail():
            raise SelectionException()

        assert exception_handler(fail)() == EXIT_POSITIVITY

    def test_unexpected_exception_is_internal(self):
        def fail():
            raise RuntimeError('boom')

        assert exception_handler(fail)() == EXIT_INTERNAL


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(SelectionException, PositivityException)
        assert isinstance(ArgumentException(), ValueError)

    def test_default_messages(self):
        assert ArtifactNotFoundException().message == 'Artifact not found.'
        assert ArtifactNotFoundException().exit_code == EXIT_VALIDATION


class TestFileDigest:
    def test_matches_sha256(self, tmp_path):
        path = tmp_path / 'edges.txt'
        path.write_bytes(b'0 1\n1 2\n')

        assert file_digest(path) == hashlib.sha256(b'0 1\n1 2\n').hexdigest()

    def test_differs_on_content(self, tmp_path):
        first = tmp_path / 'a.txt'
        second = tmp_path / 'b.txt'
        first.write_text('0 1\n')
        second.write_text('0 2\n')

        assert file_digest(first) != file_digest(second)
