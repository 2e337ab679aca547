"""Estimator-style wrappers following scikit-learn conventions.

Both estimators treat a whole complex matrix as one sample, in the
spirit of sklearn's kernel-matrix transformers: `fit` validates and
stores derived state under trailing-underscore attributes, `get_params`
and `set_params` come from BaseEstimator, and unfitted use raises
NotFittedError.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cdss import decompose
from .functions import ScalarFunction, parse_function
from .linalg import frobenius_norm
from .svfc import apply_svfc
from .validation import as_complex_matrix

__all__ = ["SingularValueTransform", "PermutationPhaseDecomposition"]


class SingularValueTransform(TransformerMixin, BaseEstimator):
    """Apply a scalar function to the singular values of a complex matrix.

    Parameters
    ----------
    function : str, ScalarFunction, or callable, default="identity"
        A function DSL string (``"soft:tau=1.5"``, ``"scale:re=0,im=2"``,
        ...), a ScalarFunction, or any callable on the nonnegative reals
        with f(0) = 0.
    tol_rank : float, default=1e-12
        Singular values below ``tol_rank * sigma_max`` count as zero.

    Attributes
    ----------
    function_ : callable
        The resolved scalar function used by `transform`.
    n_features_in_ : int
        Column count of the matrix seen in `fit`.

    Examples
    --------
    >>> import numpy as np
    >>> t = SingularValueTransform(function="soft:tau=1")
    >>> t.fit_transform(np.diag([3.0, 1.0]))
    array([[2.+0.j, 0.+0.j],
           [0.+0.j, 0.+0.j]])
    """

    def __init__(self, function="identity", tol_rank=1e-12):
        self.function = function
        self.tol_rank = tol_rank

    def fit(self, X, y=None):
        X = as_complex_matrix(X, "X")
        if isinstance(self.function, str):
            self.function_ = parse_function(self.function)
        elif isinstance(self.function, ScalarFunction) or callable(self.function):
            self.function_ = self.function
        else:
            raise ValueError("function must be a DSL string or a callable")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        return apply_svfc(self.function_, as_complex_matrix(X, "X"), self.tol_rank)


class PermutationPhaseDecomposition(BaseEstimator):
    """Decompose a complex doubly substochastic matrix into permutation-phase terms.

    Parameters
    ----------
    tol : float, default=1e-12
        Slack allowed on the row/column l1 sums of the input.

    Attributes
    ----------
    decomposition_ : CdssDecomposition
    weights_ : ndarray of shape (n_terms,)
        Nonnegative, summing to 1.
    permutations_ : ndarray of shape (n_terms, d)
        0-based permutation rows.
    phases_ : complex ndarray of shape (n_terms, d)
        Unimodular phases per term.
    n_terms_ : int
    reconstruction_error_ : float
        Frobenius distance between the combination and the input.
    """

    def __init__(self, tol=1e-12):
        self.tol = tol

    def fit(self, X, y=None):
        X = as_complex_matrix(X, "X")
        dec = decompose(X, self.tol)
        self.decomposition_ = dec
        self.weights_ = dec.weights
        self.permutations_ = np.array([pp.perm for _, pp in dec.terms], dtype=int)
        self.phases_ = np.array([pp.phases for _, pp in dec.terms], dtype=complex)
        self.n_terms_ = dec.n_terms
        self.reconstruction_error_ = frobenius_norm(dec.reconstruct() - X)
        self.n_features_in_ = X.shape[1]
        return self

    def reconstruct(self):
        """Dense matrix rebuilt from the fitted terms."""
        check_is_fitted(self)
        return self.decomposition_.reconstruct()
