import hashlib
import json
import time
from contextlib import contextmanager
from pathlib import Path

from motif_exposure import __version__
from motif_exposure.etc.errors import ArtifactNotFoundException, InputValidationException
from motif_exposure.etc.utils import file_digest


MANIFEST_FILE = 'manifest.json'


class RunManifest:
    def __init__(self,
                 command: str,
                 config: dict,
                 seeds: dict[str, int],
                 *,
                 inputs: dict[str, str] = None,
                 version: str = __version__,
                 timings: dict[str, float] = None,
                 artifacts: list[str] = None,
                 ):
        """
        Provenance of one command run.
        :param command: The subcommand that produced the run
        :param config: Snapshot of every setting the run used
        :param seeds: Master seed and every derived subsystem seed
        :param inputs: SHA-256 digests of the input files by role
        :param version: Toolkit version
        :param timings: Wall-clock seconds per stage
        :param artifacts: File names of the emitted artifacts
        """
        self.command = command
        self.config = config
        self.seeds = seeds
        self.inputs = inputs or {}
        self.version = version
        self.timings = timings or {}
        self.artifacts = artifacts or []

    @property
    def run_id(self) -> str:
        """
        Digest of everything that determines the artifacts. Timings are excluded.
        """
        payload = json.dumps(
            [self.command, self.config, self.seeds, self.inputs, self.version],
            sort_keys=True,
            default=str,
        )

        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def add_input(self, role: str, path: str | Path | None):
        if path is not None:
            self.inputs[role] = file_digest(path)

    @contextmanager
    def timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = round(time.perf_counter() - start, 6)

    def to_dict(self) -> dict:
        return {
            'runId': self.run_id,
            'command': self.command,
            'config': self.config,
            'seeds': self.seeds,
            'inputs': self.inputs,
            'version': self.version,
            'timings': self.timings,
            'artifacts': sorted(self.artifacts),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'RunManifest':
        try:
            return cls(
                payload['command'],
                payload['config'],
                payload['seeds'],
                inputs=payload.get('inputs'),
                version=payload.get('version', __version__),
                timings=payload.get('timings'),
                artifacts=payload.get('artifacts'),
            )
        except KeyError as e:
            raise InputValidationException(f'Manifest is missing field {e}') from e

    def write(self, out_dir: str | Path):
        with open(Path(out_dir) / MANIFEST_FILE, 'w', encoding='utf-8') as file:
            json.dump(self.to_dict(), file, indent=2, sort_keys=True)

    @classmethod
    def read(cls, run_dir: str | Path) -> 'RunManifest':
        path = Path(run_dir) / MANIFEST_FILE
        if not path.exists():
            raise ArtifactNotFoundException(f'Manifest not found at {path}')

        with open(path, 'r', encoding='utf-8') as file:
            return cls.from_dict(json.load(file))
