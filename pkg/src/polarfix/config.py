from dataclasses import dataclass


@dataclass(frozen=True)
class RunConfig:
    """Shared numerical settings; the defaults are the ones the test-suite pins."""

    tolerance: float = 1e-8
    dirs: int = 512
    seed: int = 0
    grid_nodes: int = 257
    max_steps: int = 50
    margin: float = 1e-9
    grid_error_factor: float = 5.0  # grid identities are asserted at factor * h

    def __post_init__(self):
        for name in ("tolerance", "dirs", "grid_nodes", "max_steps", "margin", "grid_error_factor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


DEFAULT = RunConfig()
