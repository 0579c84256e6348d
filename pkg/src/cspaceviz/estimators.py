"""scikit-learn style wrappers.

``X`` is always an ``(m, n_joints)`` array of joint angles in ``[-pi, pi]``
and ``y`` the matching 0/1 collision labels, so the pieces drop into
pipelines and ``get_params``/``set_params``/``clone`` work as usual.

>>> import numpy as np
>>> X = np.random.default_rng(0).uniform(-np.pi, np.pi, size=(200, 3))
>>> img = RadialCSpaceRenderer(n_d=50, canvas_px=600).fit_transform(X)
>>> img.shape
(680, 600, 3)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_configurations, check_labels
from .core import build_tree
from .planar import Dataset, PlanarRobot, Workspace, collision_mask
from .render import EARTH, ColorMap, RenderConfig, render


class RadialCSpaceRenderer(TransformerMixin, BaseEstimator):
    """Render sampled configurations as a radial image.

    ``fit`` validates the data, resolves the layout for its joint count and
    builds the conditional trees (``trees_``). ``transform`` returns the
    ``(H, W, 3)`` uint8 image of the configurations it is given, so
    ``fit(X_ref).transform(X_other)`` renders both on the same layout.
    """

    def __init__(self, n_d=500, epsilon_max=0.0, canvas_px=None, r0=None, ring_step=None,
                 band_gap=None, point_px=None, legend_strip_px=None, colormap=None,
                 plot_collisions=False):
        self.n_d = n_d
        self.epsilon_max = epsilon_max
        self.canvas_px = canvas_px
        self.r0 = r0
        self.ring_step = ring_step
        self.band_gap = band_gap
        self.point_px = point_px
        self.legend_strip_px = legend_strip_px
        self.colormap = colormap
        self.plot_collisions = plot_collisions

    def _config(self) -> RenderConfig:
        cmap = self.colormap
        if cmap is None:
            cmap = EARTH
        elif not isinstance(cmap, ColorMap):
            cmap = ColorMap(tuple((t, tuple(c)) for t, c in cmap))
        return RenderConfig(
            n_d=self.n_d, epsilon_max=self.epsilon_max, canvas_px=self.canvas_px, r0=self.r0,
            ring_step=self.ring_step, band_gap=self.band_gap, point_px=self.point_px,
            legend_strip_px=self.legend_strip_px, colormap=cmap,
            plot_collisions=self.plot_collisions,
        )

    def fit(self, X, y=None):
        X = check_configurations(X, min_joints=2)
        ds = Dataset(X, check_labels(y, X.shape[0]))
        spec, pert, cmap, layout = self._config().resolve(ds.n_joints)
        layout.check_fits(ds.n_joints, spec.n_d)
        self.discretization_ = spec
        self.perturbation_ = pert
        self.colormap_ = cmap
        self.layout_ = layout
        self.n_features_in_ = ds.n_joints
        self.trees_ = [build_tree(ds, i, spec) for i in range(ds.n_joints - 1)]
        return self

    def transform(self, X, y=None):
        check_is_fitted(self, "layout_")
        X = check_configurations(X, n_joints=self.n_features_in_)
        ds = Dataset(X, check_labels(y, X.shape[0]))
        return render(ds, self.discretization_, self.perturbation_, self.colormap_, self.layout_,
                      plot_collisions=self.plot_collisions)

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y, **fit_params).transform(X, y)


class PlanarCollisionChecker(ClassifierMixin, BaseEstimator):
    """Ground-truth collision labels as a classifier (1 = collision).

    There is nothing to learn; ``fit`` only records the input width.
    ``score(X, y)`` is then the fraction of labels ``y`` that agree with the
    checker, e.g. how often a learned sampler's free/collision claims hold.
    """

    def __init__(self, robot: PlanarRobot | None = None, workspace: Workspace | None = None):
        self.robot = robot
        self.workspace = workspace

    def fit(self, X=None, y=None):
        if self.robot is None:
            raise ValueError("PlanarCollisionChecker needs a robot")
        if X is not None:
            check_configurations(X, n_joints=self.robot.n_joints)
        self.n_features_in_ = self.robot.n_joints
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_configurations(X, n_joints=self.n_features_in_)
        ws = self.workspace if self.workspace is not None else Workspace()
        return collision_mask(self.robot, ws, X).astype(np.int8)
