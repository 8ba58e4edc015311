"""scikit-learn compatible transformer between density matrices and Wigner grids."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebra import DEFAULT_TOL
from .fano import build_fano_grid
from .representation import Family
from .validation import check_density_batch, check_dim, check_wigner_batch
from .wigner import WignerGrid, reconstruct_density, wigner_transform


class WignerTransformer(TransformerMixin, BaseEstimator):
    """Map density matrices to flattened discrete Wigner grids and back.

    Parameters
    ----------
    dim : int, optional
        State-space dimension ``N``.  Inferred from the data passed to
        :meth:`fit` when omitted.
    family : {"new", "leonhardt"}
        Which Fano operator family to use.  ``"leonhardt"`` needs even ``N``.
    tol : float
        Largest imaginary part tolerated in ``Tr[Delta rho]``.

    Attributes
    ----------
    grid_ : FanoGrid
        The Fano operators, built once in :meth:`fit`.
    dim_ : int
    n_features_out_ : int
        ``4 * N**2``; output rows are ``W[dq, dp]`` flattened row-major.
    """

    def __init__(self, dim=None, family="new", tol=DEFAULT_TOL):
        self.dim = dim
        self.family = family
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.dim is not None:
            dim = check_dim(self.dim)
            if X is not None:
                check_density_batch(X, dim)
        elif X is not None:
            dim = check_density_batch(X).shape[1]
        else:
            raise ValueError("either set dim or pass density matrices to fit")
        self.dim_ = dim
        self.family_ = Family(self.family)
        self.grid_ = build_fano_grid(self.family_, dim)
        self.n_features_out_ = 4 * dim * dim
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = check_density_batch(X, self.dim_)
        return np.stack([
            wigner_transform(rho, self.grid_, tol=self.tol).values.ravel() for rho in X
        ])

    def inverse_transform(self, X):
        check_is_fitted(self, "grid_")
        W = check_wigner_batch(X, self.dim_)
        return np.stack([
            reconstruct_density(WignerGrid(self.dim_, self.family_, w), self.grid_).matrix
            for w in W
        ])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "grid_")
        side = 2 * self.dim_
        return np.array(
            [f"w[{dq / 2:.1f},{dp / 2:.1f}]" for dq in range(side) for dp in range(side)],
            dtype=object,
        )
