import json

import pytest

from motif_exposure.etc.enums import DesignKind, MetricKind
from motif_exposure.etc.errors import ArtifactNotFoundException, ConfigurationParsingException
from motif_exposure.synth import HarnessConfig, load_harness_config, override_config, \
    preset_config


TOML_CONFIG = """
schema = ["Z", "2-1", "3c-2"]
replicates = 20
seeds = [3, 4]

[network]
n = 200
k = 6
beta = 0.2

[knn]
metric = "regcoef"
k_grid = [0.1, 0.5]
"""


class TestHarnessConfig:
    def test_defaults(self):
        config = HarnessConfig()

        assert config.network.kind == 'watts-strogatz'
        assert config.design.kind == DesignKind.BERNOULLI
        assert '2-1' in config.schema.codes
        assert config.tree.enabled and config.knn.enabled

    @pytest.mark.parametrize('payload, field', [
        ({'network': {'k': 5}}, 'network'),
        ({'network': {'n': 10, 'k': 10}}, 'network'),
        ({'network': {'kind': 'edge-list'}}, 'network'),
        ({'schema': ['Z', '3c-2']}, 'schema'),
        ({'knn': {'k_grid': []}}, 'knn.k_grid'),
        ({'knn': {'k_grid': [1.5]}}, 'knn.k_grid'),
        ({'design': {'p': 1.0}}, 'design.p'),
        ({'unknown': 1}, 'unknown'),
    ])
    def test_validation(self, payload, field):
        with pytest.raises(ConfigurationParsingException) as e:
            preset_config('ws-bernoulli', payload)

        assert e.value.message.startswith('Invalid harness configuration in: ')
        assert field in e.value.message

    def test_snapshot_round_trip(self):
        config = preset_config('ws-cluster', {'network': {'n': 300}})
        restored = HarnessConfig.model_validate(config.snapshot())

        assert restored == config
        assert restored.design.levels == 9

    def test_override(self):
        config = override_config(HarnessConfig(), {'tree': {'kappa': 10}})

        assert config.tree.kappa == 10
        assert config.tree.gamma == 1.96


class TestPresets:
    def test_external_disables_tree(self):
        config = preset_config('external', {'network': {'path': 'edges.txt'}})

        assert not config.tree.enabled
        assert config.design.kind == DesignKind.CLUSTER

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationParsingException):
            preset_config('lattice')


class TestLoadHarnessConfig:
    def test_toml(self, tmp_path):
        path = tmp_path / 'harness.toml'
        path.write_text(TOML_CONFIG, encoding='utf-8')

        config = load_harness_config(path)

        assert config.network.n == 200
        assert config.schema.codes == ['Z', '2-1', '3c-2']
        assert config.knn.metric == MetricKind.REGRESSION_COEFFICIENTS
        assert config.seeds == [3, 4]

    def test_json_with_preset(self, tmp_path):
        path = tmp_path / 'harness.json'
        path.write_text(json.dumps({'network': {'n': 256}}), encoding='utf-8')

        config = load_harness_config(path, 'ws-cluster')

        assert config.network.n == 256
        assert config.design.kind == DesignKind.CLUSTER

    def test_unparsable(self, tmp_path):
        path = tmp_path / 'harness.toml'
        path.write_text('network = [', encoding='utf-8')

        with pytest.raises(ConfigurationParsingException):
            load_harness_config(path)

    def test_missing(self, tmp_path):
        with pytest.raises(ArtifactNotFoundException):
            load_harness_config(tmp_path / 'harness.toml')
