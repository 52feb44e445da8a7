"""Linear baselines: a classic perceptron and ridge regression on labels."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


def _signed_targets(y, classes) -> np.ndarray:
    return np.where(y == classes[1], 1.0, -1.0)


class PerceptronClassifier(ClassifierMixin, BaseEstimator):
    """Rosenblatt perceptron with per-epoch shuffling.

    Stops early once an epoch makes no mistakes; on linearly separable
    data that happens within finitely many epochs.
    """

    def __init__(self, epochs: int = 50, random_state: int = 0):
        self.epochs = epochs
        self.random_state = random_state

    def fit(self, X, y):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if self.classes_.size != 2:
            raise ValueError("need exactly 2 classes in y")
        t = _signed_targets(y, self.classes_)
        self.n_features_in_ = X.shape[1]
        rng = np.random.default_rng(self.random_state)
        w = np.zeros(X.shape[1])
        b = 0.0
        for _ in range(self.epochs):
            mistakes = 0
            for i in rng.permutation(X.shape[0]):
                if t[i] * (X[i] @ w + b) <= 0:
                    w += t[i] * X[i]
                    b += t[i]
                    mistakes += 1
            if mistakes == 0:
                break
        self.coef_ = w
        self.intercept_ = b
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return self.classes_[(self.decision_function(X) > 0).astype(np.int64)]


def ridge_weights(X, targets, penalty: float) -> np.ndarray:
    """Solve (X~'X~ + penalty*I) w = X~' t with a trailing bias column.

    Returns the full weight vector; the last entry is the bias. A
    singular system (only possible with penalty == 0) raises with advice
    to set a nonzero penalty.
    """
    X = np.asarray(X, dtype=np.float64)
    xb = np.column_stack([X, np.ones(X.shape[0])])
    gram = xb.T @ xb + penalty * np.eye(xb.shape[1])
    try:
        return np.linalg.solve(gram, xb.T @ np.asarray(targets, dtype=np.float64))
    except np.linalg.LinAlgError:
        raise ValueError(
            "normal equations are singular; set a nonzero penalty"
        ) from None


class RidgeClassifier(ClassifierMixin, BaseEstimator):
    """Least squares on +/-1 coded labels with L2 shrinkage; classify by sign."""

    def __init__(self, penalty: float = 1.0):
        self.penalty = penalty

    def fit(self, X, y):
        if self.penalty < 0:
            raise ValueError("penalty must be >= 0")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if self.classes_.size != 2:
            raise ValueError("need exactly 2 classes in y")
        w = ridge_weights(X, _signed_targets(y, self.classes_), self.penalty)
        self.coef_ = w[:-1]
        self.intercept_ = float(w[-1])
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return self.classes_[(self.decision_function(X) > 0).astype(np.int64)]
