"""scikit-learn style wrappers.

``SignatureTransformer`` maps functions to their invariant vectors;
``StableClosure`` fits the stable class generated by a sample of functions and
predicts membership in it.  Inputs are function literals or ``BoolFn`` values.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .clones import member, parse_clone
from .closure import classify, descriptor_member, parse_descriptor
from .zhegalkin import BoolFn, parse_fn, signature

FEATURES = ("arity", "degree", "charrank", "parity", "c0", "c1")


def check_functions(X):
    """Coerce an iterable of literals or BoolFn values into a list of BoolFn."""
    if isinstance(X, (str, BoolFn)):
        raise TypeError("expected a collection of functions, not a single function")
    out = []
    for x in X:
        if isinstance(x, BoolFn):
            out.append(x)
        elif isinstance(x, str):
            out.append(parse_fn(x))
        else:
            raise TypeError(f"cannot interpret {x!r} as a Boolean function")
    return out


class SignatureTransformer(TransformerMixin, BaseEstimator):
    """Rows of (arity, degree, charrank, parity, c0, c1), optionally with clone memberships."""

    def __init__(self, clones=()):
        self.clones = clones

    def fit(self, X, y=None):
        check_functions(X)
        self.clones_ = [parse_clone(c) if isinstance(c, str) else c for c in self.clones]
        return self

    def transform(self, X):
        check_is_fitted(self, "clones_")
        rows = []
        for f in check_functions(X):
            s = signature(f)
            rows.append([f.arity, s.degree, s.charrank, s.parity, s.c0, s.c1]
                        + [int(member(c, f)) for c in self.clones_])
        return np.array(rows, dtype=np.int64).reshape(-1, len(FEATURES) + len(self.clones_))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "clones_")
        return np.array(list(FEATURES) + [f"in_{c}" for c in self.clones_], dtype=object)


class StableClosure(ClassifierMixin, BaseEstimator):
    """Membership in the stable class generated by the fitted functions.

    With ``y`` given, only the functions labelled 1 generate the class; a
    fixed ``target`` class name skips fitting altogether.
    """

    def __init__(self, target=None):
        self.target = target

    def fit(self, X, y=None):
        F = check_functions(X)
        if y is not None:
            y = np.asarray(y)
            if len(y) != len(F):
                raise ValueError("X and y differ in length")
            F = [f for f, lab in zip(F, y) if lab]
        self.descriptor_ = parse_descriptor(self.target) if self.target is not None else classify(F)
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "descriptor_")
        return np.array([int(descriptor_member(self.descriptor_, f)) for f in check_functions(X)])
