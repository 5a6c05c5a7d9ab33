# this_file: src/qsmkit/phantom/spec.py
"""Phantom description: structures, default head and randomized variants.

Structure centres are in mm relative to the grid centre; x runs left-right,
y posterior-anterior and z inferior-superior.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qsmkit.core.constants import Shape, Susceptibility
from qsmkit.core.exceptions import ConfigError

Triple = tuple[float, float, float]


class Structure(BaseModel):
    """One primitive of the phantom; later structures override earlier ones."""

    model_config = ConfigDict(frozen=True)

    name: str = ""
    shape: Shape
    center: Triple = (0.0, 0.0, 0.0)
    semi_axes: Triple
    inner_semi_axes: Triple | None = None
    susceptibility: float
    label: int

    @field_validator("semi_axes")
    @classmethod
    def _positive(cls, axes: Triple) -> Triple:
        if any(a <= 0 for a in axes):
            msg = "semi-axes must be positive"
            raise ValueError(msg)
        return axes

    @model_validator(mode="after")
    def _shell(self) -> Structure:
        if self.inner_semi_axes is not None and any(
            i <= 0 or i >= o for i, o in zip(self.inner_semi_axes, self.semi_axes)
        ):
            msg = f"{self.name or self.label}: inner semi-axes must be positive and smaller than the outer ones"
            raise ValueError(msg)
        if self.label < 1:
            msg = "labels must be positive integers"
            raise ValueError(msg)
        return self

    def occupancy(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Boolean coverage on voxel-centre coordinates (mm)."""
        inside = self._inside(x, y, z, self.semi_axes)
        if self.inner_semi_axes is not None:
            inside &= ~self._inside(x, y, z, self.inner_semi_axes)
        return inside

    def _inside(self, x: np.ndarray, y: np.ndarray, z: np.ndarray, axes: Triple) -> np.ndarray:
        cx, cy, cz = self.center
        if self.shape is Shape.BOX:
            return (np.abs(x - cx) <= axes[0]) & (np.abs(y - cy) <= axes[1]) & (np.abs(z - cz) <= axes[2])
        if self.shape is Shape.SPHERE:
            axes = (axes[0], axes[0], axes[0])
        return ((x - cx) / axes[0]) ** 2 + ((y - cy) / axes[1]) ** 2 + ((z - cz) / axes[2]) ** 2 <= 1.0

    def extent(self) -> Triple:
        """Half-width of the bounding box per axis (mm)."""
        if self.shape is Shape.SPHERE:
            return (self.semi_axes[0],) * 3  # type: ignore[return-value]
        return self.semi_axes


class PhantomSpec(BaseModel):
    """A synthetic head: brain structures, background sources and grid."""

    dims: tuple[int, int, int] = (64, 64, 64)
    voxel_size: Triple = (1.0, 1.0, 1.0)
    structures: list[Structure] = Field(default_factory=list)
    background_structures: list[Structure] = Field(default_factory=list)
    head: Structure | None = None
    outside_susceptibility: float = Susceptibility.AIR
    background_smoothing_mm: float = 1.5
    seed: int = 0

    @model_validator(mode="after")
    def _labels_unique(self) -> PhantomSpec:
        labels = [s.label for s in (*self.structures, *self.background_structures)]
        if len(labels) != len(set(labels)):
            msg = f"structure labels must be unique, got {labels}"
            raise ValueError(msg)
        if min(self.dims) < 1 or min(self.voxel_size) <= 0:
            msg = "grid dims and voxel sizes must be positive"
            raise ValueError(msg)
        if self.background_smoothing_mm < 0:
            msg = "background_smoothing_mm must be >= 0"
            raise ValueError(msg)
        return self

    @classmethod
    def load(cls, path: str | Path) -> PhantomSpec:
        try:
            return cls.model_validate_json(Path(path).read_text())
        except ValidationError as e:
            msg = f"invalid phantom spec {path}: {e.errors()[0]['msg']}"
            raise ConfigError(msg) from e

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.model_dump_json(indent=2))


def _e(name: str, label: int, chi: float, center: Triple, semi: Triple, inner: Triple | None = None) -> Structure:
    return Structure(
        name=name,
        shape=Shape.ELLIPSOID,
        center=center,
        semi_axes=semi,
        inner_semi_axes=inner,
        susceptibility=chi,
        label=label,
    )


def default_phantom_spec(dims: tuple[int, int, int] = (64, 64, 64), scale: float = 1.0) -> PhantomSpec:
    """Procedural head with the reference susceptibility values.

    ``scale`` multiplies every length, so larger grids can carry a larger head.
    """
    s = scale

    def sc(t: Triple) -> Triple:
        return (t[0] * s, t[1] * s, t[2] * s)

    chi = Susceptibility
    brain = [
        _e("csf", 1, chi.CSF, sc((0, 0, 0)), sc((16, 19, 14))),
        _e("white_matter", 2, chi.WHITE_MATTER, sc((0, 0, 1)), sc((13, 16, 11))),
        _e("cerebellum", 3, chi.CEREBELLUM, sc((0, -12, -6)), sc((8, 4, 4))),
        _e("pons", 4, chi.PONS, sc((0, -5, -7)), sc((3, 3, 2))),
        _e("medulla", 5, chi.MEDULLA, sc((0, -6, -11)), sc((2, 2, 2.5))),
        _e("midbrain", 6, chi.MIDBRAIN, sc((0, -4, -3)), sc((3, 2.5, 2))),
        _e("thalamus", 7, chi.THALAMUS, sc((0, -1, 2)), sc((4, 3, 2.5))),
        Structure(
            name="hypothalamus",
            shape=Shape.SPHERE,
            center=sc((0, 3, -1)),
            semi_axes=sc((2, 2, 2)),
            susceptibility=chi.HYPOTHALAMUS,
            label=8,
        ),
        _e("hippocampus", 9, chi.HIPPOCAMPUS, sc((7, -2, -3)), sc((2, 5, 2))),
    ]
    background = [
        _e("fat", 20, chi.FAT, sc((0, 0, 0)), sc((24.5, 27.5, 22.5)), sc((23, 26, 21))),
        _e("skull", 21, chi.SKULL, sc((0, 0, 0)), sc((23, 26, 21)), sc((21, 24, 19))),
        Structure(
            name="nasal_air",
            shape=Shape.SPHERE,
            center=sc((0, 21, -14)),
            semi_axes=sc((2.5, 2.5, 2.5)),
            susceptibility=chi.AIR,
            label=22,
        ),
    ]
    head = _e("head", 99, 0.0, (0, 0, 0), sc((24.5, 27.5, 22.5)))
    return PhantomSpec(dims=dims, structures=brain, background_structures=background, head=head)


def random_phantom_spec(seed: int, dims: tuple[int, int, int] = (64, 64, 64), scale: float = 1.0) -> PhantomSpec:
    """Jittered geometry with the reference values, for training and held-out phantoms."""
    rng = np.random.default_rng(seed)
    base = default_phantom_spec(dims, scale)
    envelope = float(rng.uniform(0.95, 1.05))

    def grow(t: Triple, f: float) -> Triple:
        return (t[0] * f, t[1] * f, t[2] * f)

    structures = []
    for i, st in enumerate(base.structures):
        if i < 2:  # csf envelope and white matter keep their proportions
            structures.append(st.model_copy(update={"semi_axes": grow(st.semi_axes, envelope)}))
            continue
        shift = rng.uniform(-1.5, 1.5, size=3) * scale
        factor = rng.uniform(0.8, 1.2, size=3)
        center = tuple(float(c * envelope + d) for c, d in zip(st.center, shift))
        semi = tuple(float(a * f) for a, f in zip(st.semi_axes, factor))
        structures.append(st.model_copy(update={"center": center, "semi_axes": semi}))

    background = []
    for st in base.background_structures:
        update: dict = {"semi_axes": grow(st.semi_axes, envelope), "center": grow(st.center, envelope)}
        if st.inner_semi_axes is not None:
            update["inner_semi_axes"] = grow(st.inner_semi_axes, envelope)
        if st.inner_semi_axes is None:
            update["center"] = tuple(float(c + d) for c, d in zip(update["center"], rng.uniform(-1.0, 1.0, 3) * scale))
        background.append(st.model_copy(update=update))
    head = base.head.model_copy(update={"semi_axes": grow(base.head.semi_axes, envelope)}) if base.head else None
    return base.model_copy(
        update={"structures": structures, "background_structures": background, "head": head, "seed": seed}
    )
