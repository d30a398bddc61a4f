from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .hunt import HuntEnvironment


class BasePlanner(BaseEstimator):
    """Estimator-style planner.

    ``fit`` binds the planner to one environment (graph, prior, start) and
    does any up-front work; ``start_hunt`` resets per-hunt state;
    ``next_node`` maps the current belief and position to the next node.
    Constructor arguments are hyperparameters only, so ``get_params`` and
    ``set_params`` behave as for any scikit-learn estimator.
    """

    requires_truth = False

    def fit(self, env, y=None):
        if not isinstance(env, HuntEnvironment):
            raise TypeError(f"expected a HuntEnvironment, got {type(env).__name__}")
        self.env_ = env
        self.graph_ = env.graph
        return self

    def start_hunt(self, truth=None):
        return self

    def next_node(self, belief, current):
        raise NotImplementedError

    def predict(self, states):
        """Next node for each ``(belief, current)`` pair."""
        self._check_fitted()
        return [self.next_node(belief, current) for belief, current in states]

    def _check_fitted(self):
        if getattr(self, "env_", None) is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit(env)")
