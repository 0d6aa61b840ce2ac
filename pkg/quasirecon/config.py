"""Scenario files: flat ``key = value`` lines with dotted sections.

    # default scenario
    model.chi = 1.0
    model.gamma = 0.05
    field.kind = coherent
    field.re = 0.5
    engine = analytic

Unknown and duplicate keys are errors; a typo in a rate name must never fall
back silently to a default.
"""
from dataclasses import dataclass, fields, replace
import math
import re

from quasirecon.exceptions import ConfigError, InvalidParameterError
from quasirecon.fock import FieldDensityMatrix, coherent_state, fock_state, \
    thermal_state, vacuum
from quasirecon.output import format_number
from quasirecon.params import IntegratorConfig, ModelParams
from quasirecon.protocol import Engine
from quasirecon.quasiprobability import PhaseGrid, QpdConvention


LINE_PATTERN = re.compile(r'^(?P<key>[A-Za-z_][A-Za-z0-9_.]*)\s*=\s*(?P<value>\S.*?)\s*$')
FIELD_KINDS = ('vacuum', 'fock', 'coherent', 'thermal')


@dataclass(frozen=True)
class FieldSpec:
    kind: str = 'coherent'
    n: int = 0
    beta: complex = complex(0.5, 0.3)
    nbar: float = 0.0

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise InvalidParameterError(
                f'Unknown initial field {self.kind!r}; expected one of {FIELD_KINDS}'
            )

    def build(self, dim) -> FieldDensityMatrix:
        if self.kind == 'vacuum':
            return vacuum(dim)
        if self.kind == 'fock':
            return fock_state(self.n, dim)
        if self.kind == 'coherent':
            return coherent_state(self.beta, dim)
        return thermal_state(self.nbar, dim)

    @property
    def center(self) -> complex:
        return self.beta if self.kind == 'coherent' else 0j


@dataclass(frozen=True)
class ScenarioConfig:
    model: ModelParams = ModelParams(chi=1.0, gamma=0.05, Gamma=0.1, theta=math.pi / 5,
                                     dim=32)
    field: FieldSpec = FieldSpec()
    grid: PhaseGrid = PhaseGrid()
    engine: Engine = Engine.ANALYTIC
    convention: QpdConvention = QpdConvention.NORMALIZED
    integrator: IntegratorConfig = IntegratorConfig()
    output_path: str = 'reconstruction.csv'
    workers: int = 1

    def __post_init__(self):
        if int(self.workers) != self.workers or self.workers < 1:
            raise InvalidParameterError(
                f'workers must be a positive integer, got {self.workers}'
            )

    def with_updates(self, **changes) -> 'ScenarioConfig':
        return replace(self, **changes)


def _parse_float(value):
    return float(value)


def _parse_int(value):
    if not re.fullmatch(r'[+-]?\d+', value):
        raise ValueError(f'{value!r} is not an integer')
    return int(value)


def _parse_bool(value):
    lowered = value.lower()
    if lowered in ('true', 'yes', '1'):
        return True
    if lowered in ('false', 'no', '0'):
        return False
    raise ValueError(f'{value!r} is not a boolean')


def _parse_text(value):
    return value


# key -> (section, attribute, parser)
KEYS = {
    'model.chi': ('model', 'chi', _parse_float),
    'model.gamma': ('model', 'gamma', _parse_float),
    'model.Gamma': ('model', 'Gamma', _parse_float),
    'model.theta': ('model', 'theta', _parse_float),
    'model.dim': ('model', 'dim', _parse_int),
    'field.kind': ('field', 'kind', _parse_text),
    'field.n': ('field', 'n', _parse_int),
    'field.re': ('field', 're', _parse_float),
    'field.im': ('field', 'im', _parse_float),
    'field.nbar': ('field', 'nbar', _parse_float),
    'grid.re_min': ('grid', 're_min', _parse_float),
    'grid.re_max': ('grid', 're_max', _parse_float),
    'grid.im_min': ('grid', 'im_min', _parse_float),
    'grid.im_max': ('grid', 'im_max', _parse_float),
    'grid.n_re': ('grid', 'n_re', _parse_int),
    'grid.n_im': ('grid', 'n_im', _parse_int),
    'engine': (None, 'engine', Engine.from_name),
    'convention': (None, 'convention', QpdConvention.from_name),
    'integrator.dt': ('integrator', 'dt', _parse_float),
    'integrator.renormalize': ('integrator', 'renormalize', _parse_bool),
    'integrator.drift_tolerance': ('integrator', 'drift_tolerance', _parse_float),
    'output_path': (None, 'output_path', _parse_text),
    'workers': (None, 'workers', _parse_int),
}


def _read_assignments(text):
    assignments = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split('#', 1)[0].strip()
        if not line:
            continue
        match = LINE_PATTERN.match(line)
        if not match:
            raise ConfigError(f'line {number}: expected "key = value", got {raw_line!r}')
        key, value = match.group('key'), match.group('value')
        if key not in KEYS:
            raise ConfigError(f'line {number}: unknown key {key!r}')
        if key in assignments:
            raise ConfigError(f'line {number}: duplicate key {key!r}')
        try:
            assignments[key] = KEYS[key][2](value)
        except (ValueError, InvalidParameterError) as e:
            raise ConfigError(f'line {number}: bad value for {key!r}: {e}') from e
    return assignments


def parse_config(text, base: ScenarioConfig = None) -> ScenarioConfig:
    base = base or ScenarioConfig()
    sections = {'model': {}, 'field': {}, 'grid': {}, 'integrator': {}}
    top_level = {}
    for key, value in _read_assignments(text).items():
        section, attribute, _ = KEYS[key]
        if section is None:
            top_level[attribute] = value
        else:
            sections[section][attribute] = value

    field_changes = sections['field']
    if 're' in field_changes or 'im' in field_changes:
        beta = complex(field_changes.pop('re', base.field.beta.real),
                       field_changes.pop('im', base.field.beta.imag))
        field_changes['beta'] = beta

    try:
        return replace(
            base,
            model=replace(base.model, **sections['model']),
            field=replace(base.field, **field_changes),
            grid=replace(base.grid, **sections['grid']),
            integrator=replace(base.integrator, **sections['integrator']),
            **top_level,
        )
    except InvalidParameterError as e:
        raise ConfigError(f'invalid scenario: {e}') from e


def load_config(path) -> ScenarioConfig:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f'cannot read scenario file {path}: {e}') from e
    return parse_config(text)


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_number(value)
    if hasattr(value, 'value'):
        return value.value
    return str(value)


def dump_config(config: ScenarioConfig) -> str:
    lines = []
    for section in ('model', 'field', 'grid', 'integrator'):
        component = getattr(config, section)
        for item in fields(component):
            value = getattr(component, item.name)
            if item.name == 'beta':
                lines.append(f'field.re = {format_number(value.real)}')
                lines.append(f'field.im = {format_number(value.imag)}')
            else:
                lines.append(f'{section}.{item.name} = {_format_value(value)}')
    for name in ('engine', 'convention', 'output_path', 'workers'):
        lines.append(f'{name} = {_format_value(getattr(config, name))}')
    return '\n'.join(lines) + '\n'
