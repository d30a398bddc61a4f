"""Deep Q-learning planner trained per environment on the belief-state MDP.

State: per-node probability of finding at least one unfound object, plus
either the travel costs from the current node (map variant) or a one-hot
current-node indicator.  Action: the node to travel to next.  Reward: the
negative travel cost of the move.
"""

from dataclasses import dataclass

import numpy as np

from .base import BasePlanner
from .belief import BeliefState, sample_arrangement
from .hunt import default_step_limit
from .nn import Adam, QNetwork, load_network, save_network, td_loss_and_gradients

__all__ = [
    "TrainConfig",
    "ReplayBuffer",
    "HuntMDP",
    "build_observation",
    "dqn_next",
    "learning_rate_at",
    "epsilon_at",
    "train",
    "DQNPlanner",
]


@dataclass
class TrainConfig:
    gamma: float = 0.95
    lr_start: float = 0.05
    lr_zero_epoch: int = 40
    epochs: int = 40
    steps_per_epoch: int = 2000
    batch_size: int = 64
    test_episodes: int = 200
    buffer_capacity: int = 20000
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.1
    epsilon_floor: float = 0.02
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    target_sync: int = 1000
    normalize: bool = True
    seed: int = 0

    def __post_init__(self):
        for name in ("gamma", "lr_start", "epsilon_start", "epsilon_decay",
                     "epsilon_floor", "adam_eps"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("lr_zero_epoch", "epochs", "steps_per_epoch", "batch_size",
                     "test_episodes", "buffer_capacity", "target_sync"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def learning_rate_at(epoch, config=None):
    config = config or TrainConfig()
    return config.lr_start * max(0.0, 1.0 - epoch / config.lr_zero_epoch)


def epsilon_at(epoch, config=None):
    config = config or TrainConfig()
    return max(config.epsilon_floor, config.epsilon_start - config.epsilon_decay * epoch)


class ReplayBuffer:
    """Fixed-capacity FIFO ring of transitions."""

    def __init__(self, capacity, obs_size):
        self.capacity = int(capacity)
        self.obs = np.zeros((self.capacity, obs_size))
        self.next_obs = np.zeros((self.capacity, obs_size))
        self.action = np.zeros(self.capacity, dtype=np.int64)
        self.reward = np.zeros(self.capacity)
        self.terminal = np.zeros(self.capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def __len__(self):
        return self._size

    def add(self, obs, action, reward, next_obs, terminal):
        i = self._next
        self.obs[i] = obs
        self.action[i] = action
        self.reward[i] = reward
        self.next_obs[i] = next_obs
        self.terminal[i] = terminal
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _ordered_index(self):
        if self._size < self.capacity:
            return np.arange(self._size)
        return (np.arange(self.capacity) + self._next) % self.capacity

    def transitions(self):
        """Stored transitions, oldest first."""
        idx = self._ordered_index()
        return [(self.obs[i].copy(), int(self.action[i]), float(self.reward[i]),
                 self.next_obs[i].copy(), bool(self.terminal[i])) for i in idx]

    def sample(self, batch_size, rng):
        idx = rng.integers(0, self._size, size=batch_size)
        return {
            "obs": self.obs[idx],
            "action": self.action[idx],
            "reward": self.reward[idx],
            "next_obs": self.next_obs[idx],
            "terminal": self.terminal[idx],
        }


def build_observation(graph, belief, current, with_map=True, normalize=True):
    """Length-2l network input for the current belief and position."""
    n = graph.node_count
    obs = np.empty(2 * n)
    obs[:n] = belief.prob_any_unfound()
    if with_map:
        costs = graph.cost[current]
        obs[n:] = costs / graph.max_cost if normalize and graph.max_cost > 0 else costs
    else:
        obs[n:] = 0.0
        obs[n + current] = 1.0
    return obs


def _greedy(q, current):
    q = np.array(q, dtype=np.float64)
    q[current] = -np.inf
    return int(np.argmax(q))


def dqn_next(net, graph, belief, current, with_map=True, normalize=True):
    """Greedy action with the current node masked out; ties go to the lowest index."""
    return _greedy(net.forward(build_observation(graph, belief, current, with_map, normalize)),
                   current)


class HuntMDP:
    """One environment as an episodic MDP; arrangements are resampled per episode."""

    def __init__(self, env, with_map=True, normalize=True, step_limit=None):
        if env.node_count < 2:
            raise ValueError("need at least two nodes to move between")
        self.env = env
        self.with_map = with_map
        self.normalize = normalize
        self.step_limit = step_limit or default_step_limit(env.node_count, env.object_count)

    def reset(self, rng):
        """Start a fresh episode; returns the first observation, or None if the
        initial observation already completed the hunt."""
        self.truth = sample_arrangement(self.env.prior, rng)
        self.belief = BeliefState.from_prior(self.env.prior)
        self.current = self.env.start
        self.steps = 0
        self.belief.observe(self.current, self.truth.objects_at(self.current))
        if self.belief.all_found:
            return None
        return self.observation()

    def observation(self):
        return build_observation(self.env.graph, self.belief, self.current,
                                 self.with_map, self.normalize)

    def step(self, action):
        reward = -float(self.env.graph.cost[self.current, action])
        self.current = int(action)
        self.belief.observe(self.current, self.truth.objects_at(self.current))
        self.steps += 1
        done = self.belief.all_found
        truncated = not done and self.steps >= self.step_limit
        return self.observation(), reward, done, truncated


def _evaluate(net, mdp, episodes, rng):
    returns = np.zeros(episodes)
    for ep in range(episodes):
        obs = mdp.reset(rng)
        total = 0.0
        while obs is not None:
            obs, reward, done, truncated = mdp.step(_greedy(net.forward(obs), mdp.current))
            total += reward
            if done or truncated:
                break
        returns[ep] = total
    # ordered summation keeps the mean reproducible
    return float(sum(returns.tolist()) / episodes)


def train(env, config=None, with_map=True, callback=None):
    """Train a Q-network on `env`.

    Returns ``(best_net, curve)`` where `curve` holds one
    ``(epoch, mean_test_return, epsilon, lr)`` row per epoch and `best_net`
    is the network with the highest mean test return.
    """
    config = config or TrainConfig()
    seeds = np.random.SeedSequence(config.seed).spawn(5)
    init_rng, env_rng, explore_rng, replay_rng, test_rng = (
        np.random.default_rng(s) for s in seeds)

    mdp = HuntMDP(env, with_map, config.normalize)
    test_mdp = HuntMDP(env, with_map, config.normalize)
    n = env.node_count
    net = QNetwork.for_nodes(n, rng=init_rng)
    target = net.copy()
    opt = Adam(net.params, config.adam_beta1, config.adam_beta2, config.adam_eps)
    buffer = ReplayBuffer(config.buffer_capacity, 2 * n)

    best_net, best_return = net.copy(), -np.inf
    curve = []
    obs = None
    for epoch in range(config.epochs):
        eps = epsilon_at(epoch, config)
        lr = learning_rate_at(epoch, config)
        for _ in range(config.steps_per_epoch):
            while obs is None:
                obs = mdp.reset(env_rng)
            current = mdp.current
            if explore_rng.random() < eps:
                action = int(explore_rng.integers(0, n - 1))
                action += action >= current
            else:
                action = _greedy(net.forward(obs), current)
            next_obs, reward, done, truncated = mdp.step(action)
            buffer.add(obs, action, reward, next_obs, done)
            obs = None if done or truncated else next_obs

            if len(buffer) >= config.batch_size:
                batch = buffer.sample(config.batch_size, replay_rng)
                _, grads = td_loss_and_gradients(net, target, batch, config.gamma)
                opt.step(net.params, grads, lr)
                if opt.step_count % config.target_sync == 0:
                    target = net.copy()

        mean_return = _evaluate(net, test_mdp, config.test_episodes, test_rng)
        curve.append((epoch, mean_return, eps, lr))
        if mean_return > best_return:
            best_net, best_return = net.copy(), mean_return
        if callback is not None:
            callback(epoch, mean_return, eps, lr)
    return best_net, curve


class DQNPlanner(BasePlanner):
    """Q-learning planner; ``fit`` trains a network for one environment.

    Parameters mirror `TrainConfig`; ``with_map`` selects whether travel
    costs from the current node are part of the observation.
    """

    def __init__(self, with_map=True, epochs=40, steps_per_epoch=2000, batch_size=64,
                 test_episodes=200, gamma=0.95, lr_start=0.05, buffer_capacity=20000,
                 target_sync=1000, normalize=True, random_state=0):
        self.with_map = with_map
        self.epochs = epochs
        self.steps_per_epoch = steps_per_epoch
        self.batch_size = batch_size
        self.test_episodes = test_episodes
        self.gamma = gamma
        self.lr_start = lr_start
        self.buffer_capacity = buffer_capacity
        self.target_sync = target_sync
        self.normalize = normalize
        self.random_state = random_state

    def train_config(self):
        return TrainConfig(
            gamma=self.gamma, lr_start=self.lr_start, epochs=self.epochs,
            steps_per_epoch=self.steps_per_epoch, batch_size=self.batch_size,
            test_episodes=self.test_episodes, buffer_capacity=self.buffer_capacity,
            target_sync=self.target_sync, normalize=self.normalize, seed=self.random_state)

    def fit(self, env, y=None):
        super().fit(env)
        self.network_, self.learning_curve_ = train(env, self.train_config(), self.with_map)
        return self

    def set_network(self, env, network):
        """Bind a pre-trained network instead of training."""
        if network.layer_sizes[0] != 2 * env.node_count or network.layer_sizes[-1] != env.node_count:
            raise ValueError(f"network shape {network.layer_sizes} does not fit "
                             f"a {env.node_count}-node environment")
        super().fit(env)
        self.network_ = network
        self.learning_curve_ = []
        return self

    def next_node(self, belief, current):
        return dqn_next(self.network_, self.graph_, belief, current,
                        self.with_map, self.normalize)

    def save(self, fh):
        self._check_fitted()
        save_network(self.network_, fh, self.with_map, self.normalize)

    @classmethod
    def load(cls, fh, env):
        net, with_map, normalize = load_network(fh)
        planner = cls(with_map=with_map, normalize=normalize)
        return planner.set_network(env, net)
