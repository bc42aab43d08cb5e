"""Seeded synthetic cohorts so every pipeline stage is testable offline.

Each diagnosis label gets a Gaussian cluster (unit within-cluster std) around a
latent 2-D center; centers sit on a line at multiples of ``separation``, so
pairwise center distances are at least ``separation`` exactly. The class signal
is written into a small set of designated feature columns and every other
column is low-amplitude noise, which makes feature-set ablations meaningful.
The ``swiss_roll_lift`` nonlinearity rolls the latent sheet into 3-D so linear
projections smear the clusters while local-neighborhood methods can unroll
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import CATEGORIES, LABELS, CategoryTaxonomy, FeatureMatrix

NONLINEARITIES = ("none", "swiss_roll_lift")

# Roll geometry: angle advances 2/3 turn per center gap so the four clusters
# cover two full turns (the first and last share an angular direction at
# different radii); radius grows slowly enough that successive wraps come near
# each other in 3-D without letting neighborhoods jump across wraps.
_ROLL_START_ANGLE = np.pi / 2
_ROLL_TURNS_PER_GAP = 2.0 / 3.0
_ROLL_BASE_RADIUS = 6.0
_ROLL_RADIUS_RATE = 1.0


@dataclass(frozen=True)
class SyntheticSpec:
    n_per_label: dict = field(
        default_factory=lambda: {"HC": 100, "AD": 100, "MCI": 100, "Depr": 100}
    )
    n_features: int = 36
    #: category -> feature count; None spreads n_features evenly.
    category_plan: dict | None = None
    separation: float = 10.0
    nonlinearity: str = "none"
    subjects_per_sample_group: int = 2
    seed: int = 0
    #: categories whose leading features carry the class signal (None: the
    #: first feature columns overall).
    informative_categories: tuple | None = None
    noise_std: float = 0.05

    def __post_init__(self):
        for lab, count in self.n_per_label.items():
            if lab not in LABELS:
                raise ValueError(f"unknown label {lab!r}")
            if count <= 0:
                raise ValueError(f"n_per_label[{lab!r}] must be positive, got {count}")
        if self.separation < 0:
            raise ValueError("separation must be >= 0")
        if self.nonlinearity not in NONLINEARITIES:
            raise ValueError(
                f"nonlinearity must be one of {NONLINEARITIES}, "
                f"got {self.nonlinearity!r}"
            )
        if self.subjects_per_sample_group < 1:
            raise ValueError("subjects_per_sample_group must be >= 1")
        if self.noise_std <= 0:
            raise ValueError("noise_std must be > 0")


def default_category_plan(n_features: int) -> dict:
    base, extra = divmod(n_features, len(CATEGORIES))
    return {
        cat: base + (1 if i < extra else 0) for i, cat in enumerate(CATEGORIES)
    }


def label_centers(spec: SyntheticSpec) -> np.ndarray:
    """Latent 2-D class centers: (k * separation, 0) per label in LABELS order."""
    labs = [lab for lab in LABELS if lab in spec.n_per_label]
    return np.column_stack(
        [np.arange(len(labs)) * spec.separation, np.zeros(len(labs))]
    )


def _swiss_roll(latent: np.ndarray, separation: float) -> np.ndarray:
    """Map latent (u, v) onto a rolled 3-D sheet with slowly growing radius."""
    u, v = latent[:, 0], latent[:, 1]
    gap = separation if separation > 0 else 1.0
    theta = _ROLL_START_ANGLE + (2.0 * np.pi * _ROLL_TURNS_PER_GAP / gap) * u
    radius = _ROLL_BASE_RADIUS + _ROLL_RADIUS_RATE * (theta - _ROLL_START_ANGLE)
    return np.column_stack([radius * np.cos(theta), v, radius * np.sin(theta)])


def generate_cohort(
    spec: SyntheticSpec,
) -> tuple[FeatureMatrix, CategoryTaxonomy, np.ndarray]:
    """Build (matrix, taxonomy, ground-truth cluster labels) from a spec."""
    plan = spec.category_plan or default_category_plan(spec.n_features)
    for cat in plan:
        if cat not in CATEGORIES:
            raise ValueError(f"unknown category {cat!r} in plan")
    if sum(plan.values()) != spec.n_features:
        raise ValueError(
            f"category plan covers {sum(plan.values())} features, "
            f"expected {spec.n_features}"
        )

    feature_names = []
    categories = []
    for cat in CATEGORIES:
        slug = cat.replace(" ", "_")
        for i in range(plan.get(cat, 0)):
            feature_names.append(f"{slug}_{i:03d}")
            categories.append(cat)
    taxonomy = CategoryTaxonomy(
        mapping=dict(zip(feature_names, categories))
    )

    signal_dims = 2 if spec.nonlinearity == "none" else 3
    if spec.informative_categories is not None:
        wanted = set(spec.informative_categories)
        signal_cols = [i for i, c in enumerate(categories) if c in wanted][
            :signal_dims
        ]
    else:
        signal_cols = list(range(min(signal_dims, spec.n_features)))
    if len(signal_cols) < signal_dims:
        raise ValueError(
            f"need at least {signal_dims} features to carry the class signal "
            f"(found {len(signal_cols)} in the informative categories)"
        )

    labs = [lab for lab in LABELS if lab in spec.n_per_label]
    centers = label_centers(spec)
    group = spec.subjects_per_sample_group
    for lab in labs:
        if spec.n_per_label[lab] % group != 0:
            raise ValueError(
                f"n_per_label[{lab!r}] = {spec.n_per_label[lab]} is not divisible "
                f"by subjects_per_sample_group = {group}"
            )

    rng = np.random.default_rng(spec.seed)
    total = sum(spec.n_per_label[lab] for lab in labs)
    values = rng.normal(0.0, spec.noise_std, size=(total, spec.n_features))

    sample_ids, subject_ids, tags, labels_out = [], [], [], []
    truth = np.empty(total, dtype=np.int64)
    row = 0
    subject_counter = 0
    for k, lab in enumerate(labs):
        count = spec.n_per_label[lab]
        latent = centers[k] + rng.standard_normal((count, 2))
        signal = latent if spec.nonlinearity == "none" else _swiss_roll(
            latent, spec.separation
        )
        for j, col in enumerate(signal_cols):
            values[row : row + count, col] = signal[:, j]
        for i in range(count):
            if i % group == 0:
                subject_counter += 1
            sample_ids.append(f"s{row + i:05d}")
            subject_ids.append(f"subj{subject_counter:04d}")
            tags.append("synth")
            labels_out.append(lab)
        truth[row : row + count] = k
        row += count

    matrix = FeatureMatrix(
        sample_ids=tuple(sample_ids),
        subject_ids=tuple(subject_ids),
        dataset_tags=tuple(tags),
        labels=tuple(labels_out),
        feature_names=tuple(feature_names),
        values=values,
    )
    return matrix, taxonomy, truth
