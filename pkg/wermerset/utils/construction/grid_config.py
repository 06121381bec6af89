import dataclasses
import typing

from wermerset.utils.errors import ConfigError


HARD_STAGE_CAP = 6


@dataclasses.dataclass(frozen=True)
class GridConfig(object):
    """The sampling densities and tolerances every grid check runs with

    Params:
        z_grid: float = 32
            Sample points per unit length in the z-plane
        w_grid: float = 32
            Sample points per unit length on w-windows (rasters, fibre slices)
        margin: float = 0.5
            Relative safety factor the selectors enforce, in (0, 1/2]
        max_stage: int = 5
            The last stage a construction may be advanced to (at most 6)
        seed: int = 0
            Seed for every randomised sampler
        cluster_tol: float = 1e-7
            Distance under which computed roots count as one
        collision_tol: float = 1e-4
            Distance under which collision candidates are merged
        root_tol: float = 1e-8
            Backward error allowed when checking that branches are roots
        verify_factor: int = 2
            How much denser the verification grid is than the selection grid
        local_samples: int = 8
            Angles per ring of the local stencils placed around roots
        probe_samples: int = 512
            Points on a probe circle
        order_radius: float = 0.05
            Outer ring radius used to estimate collision orders
        branch_exclusion: float = 1e-3
            Collision candidates this close to a branch point are ignored
    """

    z_grid: float = 32.0
    w_grid: float = 32.0
    margin: float = 0.5
    max_stage: int = 5
    seed: int = 0
    cluster_tol: float = 1e-7
    collision_tol: float = 1e-4
    root_tol: float = 1e-8
    verify_factor: int = 2
    local_samples: int = 8
    probe_samples: int = 512
    order_radius: float = 0.05
    branch_exclusion: float = 1e-3

    def __post_init__(self):
        for field in dataclasses.fields(self):
            if field.type in (float, "float"):
                value = getattr(self, field.name)
                try:
                    object.__setattr__(self, field.name, float(value))
                except (TypeError, ValueError):
                    raise ConfigError(field.name, value, "should be a number (float)")
        for key in ("z_grid", "w_grid", "cluster_tol", "collision_tol", "root_tol", "order_radius", "branch_exclusion"):
            value = getattr(self, key)
            if not value > 0:
                raise ConfigError(key, value, "must be positive")
        if not 0 < self.margin <= 0.5:
            raise ConfigError("margin", self.margin, "must lie in (0, 1/2]")
        if not 1 <= self.max_stage <= HARD_STAGE_CAP:
            raise ConfigError("max_stage", self.max_stage, f"must lie between 1 and {HARD_STAGE_CAP}")
        if self.verify_factor < 1:
            raise ConfigError("verify_factor", self.verify_factor, "must be at least 1")
        if self.local_samples < 4:
            raise ConfigError("local_samples", self.local_samples, "must be at least 4")
        if self.probe_samples < 64:
            raise ConfigError("probe_samples", self.probe_samples, "must be at least 64")

    @classmethod
    def from_dict(cls, data: typing.Dict[str, typing.Any]) -> "GridConfig":
        """Builds a config from a [grid] table, rejecting keys it doesn't know"""

        known = {field.name: field for field in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in (data or {}).items():
            if key not in known:
                raise ConfigError(key, value, "is not a grid setting")
            kind = int if known[key].type in (int, "int") else float
            try:
                kwargs[key] = kind(value)
            except (TypeError, ValueError):
                raise ConfigError(key, value, f"should be a number ({kind.__name__})")
        return cls(**kwargs)

    def to_dict(self) -> typing.Dict[str, typing.Any]:
        return dataclasses.asdict(self)

    def verification(self) -> "GridConfig":
        """The same config with both grid densities multiplied by verify_factor"""

        return dataclasses.replace(
            self,
            z_grid=self.z_grid * self.verify_factor,
            w_grid=self.w_grid * self.verify_factor,
        )

    def with_overrides(self, **overrides) -> "GridConfig":
        """A copy with the given (non-None) fields replaced"""

        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes) if changes else self
