import math
import os
import tempfile
import unittest

from quasirecon.config import FieldSpec, ScenarioConfig, dump_config, load_config, \
    parse_config
from quasirecon.exceptions import ConfigError, InvalidParameterError
from quasirecon.protocol import Engine
from quasirecon.quasiprobability import QpdConvention


SCENARIO = """
# lossy cavity, thermal field
model.chi = 2.0
model.gamma = 0.1
model.theta = 0.3
model.dim = 24   # truncation
field.kind = thermal
field.nbar = 0.4
grid.n_re = 5
grid.n_im = 3
engine = oracle
convention = half
integrator.dt = 5e-4
integrator.renormalize = yes
workers = 4
"""


class TestDefaults(unittest.TestCase):
    def test_default_scenario(self):
        config = ScenarioConfig()
        self.assertEqual(config.model.chi, 1.0)
        self.assertEqual(config.model.gamma, 0.05)
        self.assertEqual(config.model.Gamma, 0.1)
        self.assertAlmostEqual(config.model.theta, math.pi / 5)
        self.assertEqual(config.model.dim, 32)
        self.assertEqual(config.field.beta, complex(0.5, 0.3))
        self.assertEqual(config.grid.shape, (9, 9))
        self.assertIs(config.engine, Engine.ANALYTIC)
        self.assertIs(config.convention, QpdConvention.NORMALIZED)
        self.assertEqual(config.integrator.dt, 1e-3)
        self.assertEqual(config.output_path, 'reconstruction.csv')

    def test_with_updates_returns_copy(self):
        config = ScenarioConfig()
        updated = config.with_updates(workers=3)
        self.assertEqual(config.workers, 1)
        self.assertEqual(updated.workers, 3)


class TestParsing(unittest.TestCase):
    def setUp(self):
        self.config = parse_config(SCENARIO)

    def test_values(self):
        self.assertEqual(self.config.model.chi, 2.0)
        self.assertEqual(self.config.model.dim, 24)
        self.assertEqual(self.config.model.Gamma, 0.1)
        self.assertEqual(self.config.field.kind, 'thermal')
        self.assertEqual(self.config.field.nbar, 0.4)
        self.assertEqual(self.config.grid.shape, (5, 3))
        self.assertIs(self.config.engine, Engine.ORACLE)
        self.assertIs(self.config.convention, QpdConvention.HALF)
        self.assertTrue(self.config.integrator.renormalize)
        self.assertEqual(self.config.integrator.dt, 5e-4)
        self.assertEqual(self.config.workers, 4)

    def test_paper_convention_name(self):
        config = parse_config('convention = paper\n')
        self.assertIs(config.convention, QpdConvention.HALF)

    def test_partial_coherent_amplitude(self):
        config = parse_config('field.im = -0.2')
        self.assertEqual(config.field.beta, complex(0.5, -0.2))

    def test_round_trip(self):
        self.assertEqual(parse_config(dump_config(self.config)), self.config)
        self.assertEqual(parse_config(dump_config(ScenarioConfig())), ScenarioConfig())

    def test_unknown_key(self):
        with self.assertRaisesRegex(ConfigError, 'line 2: unknown key'):
            parse_config('model.chi = 1\nmodel.gama = 0.1\n')

    def test_duplicate_key(self):
        with self.assertRaisesRegex(ConfigError, 'duplicate'):
            parse_config('engine = oracle\nengine = analytic\n')

    def test_malformed_line(self):
        with self.assertRaisesRegex(ConfigError, 'line 1'):
            parse_config('model.chi 1.0')

    def test_bad_values(self):
        for text in ('model.dim = 1.5', 'integrator.renormalize = maybe',
                     'engine = euler', 'model.chi = fast'):
            with self.assertRaises(ConfigError):
                parse_config(text)

    def test_invalid_component(self):
        with self.assertRaisesRegex(ConfigError, 'invalid scenario'):
            parse_config('model.gamma = -0.1')

    def test_load_from_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'scenario.cfg')
            with open(path, 'w') as f:
                f.write(SCENARIO)
            self.assertEqual(load_config(path), self.config)
            with self.assertRaises(ConfigError):
                load_config(os.path.join(directory, 'missing.cfg'))


class TestFieldSpec(unittest.TestCase):
    def test_build(self):
        self.assertEqual(FieldSpec(kind='fock', n=2).build(6).populations()[2], 1)
        self.assertEqual(FieldSpec(kind='vacuum').build(4).dim, 4)
        self.assertAlmostEqual(FieldSpec().build(20).trace().real, 1.0, places=12)

    def test_unknown_kind(self):
        with self.assertRaises(InvalidParameterError):
            FieldSpec(kind='squeezed')

    def test_center(self):
        self.assertEqual(FieldSpec().center, complex(0.5, 0.3))
        self.assertEqual(FieldSpec(kind='fock', n=4).center, 0j)
