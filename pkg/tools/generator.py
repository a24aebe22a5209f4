"""
随机实例生成器

每对 i < j 以概率 density 独立地连一条弧，容量和费用在给定闭区间内均匀取整；
链弧 (i, i+1) 总是保留，保证 1 到 n 有路径。
随机数使用 numpy 的 PCG64（np.random.default_rng），相同配置总是生成相同实例。
"""
import enum
import logging
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from solvers.exceptions import ConfigError
from solvers.models import FlowInstance
from solvers.oracle import _max_flow_value

logger = logging.getLogger(__name__)


class SupplyMode(str, enum.Enum):
    """供给量设定方式"""

    MAX_FLOW = "maxflow"
    FIXED = "fixed"


@dataclass(frozen=True)
class GenConfig:
    """
    生成器配置

    参数:
        node_count: 节点数 (>= 2)
        density: 每对节点连弧的概率，取值 (0, 1]
        capacity_range: 容量闭区间 [lo, hi]，lo >= 1
        cost_range: 费用闭区间 [lo, hi]，lo >= 1
        seed: 随机种子 (0 <= seed < 2**64)
        supply_mode: MAX_FLOW 取网络最大流量，FIXED 使用 supply
        supply: FIXED 模式下的供给量
    """

    node_count: int
    density: float = 0.3
    capacity_range: Tuple[int, int] = (1, 15)
    cost_range: Tuple[int, int] = (1, 15)
    seed: int = 0
    supply_mode: SupplyMode = SupplyMode.MAX_FLOW
    supply: Optional[int] = None

    def __post_init__(self):
        if self.node_count < 2:
            raise ConfigError(f"节点数必须 >= 2，实际为 {self.node_count}")
        if not 0 < self.density <= 1:
            raise ConfigError(f"密度必须在 (0, 1] 内，实际为 {self.density}")
        for name, (lo, hi) in (("capacity_range", self.capacity_range), ("cost_range", self.cost_range)):
            if lo < 1 or hi < lo:
                raise ConfigError(f"{name} 必须满足 1 <= lo <= hi，实际为 [{lo}, {hi}]")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"种子必须在 [0, 2**64) 内，实际为 {self.seed}")
        if self.supply_mode is SupplyMode.FIXED:
            if self.supply is None or self.supply < 1:
                raise ConfigError(f"FIXED 模式需要 >= 1 的供给量，实际为 {self.supply}")
        elif self.supply is not None:
            raise ConfigError("MAX_FLOW 模式下不能指定供给量")

    def describe(self) -> str:
        """单行文本形式，CLI 回显使用"""
        fields = asdict(self)
        fields["capacity_range"] = "{}:{}".format(*self.capacity_range)
        fields["cost_range"] = "{}:{}".format(*self.cost_range)
        fields["supply_mode"] = self.supply_mode.value
        if fields["supply"] is None:
            del fields["supply"]
        return " ".join(f"{key}={value}" for key, value in fields.items())


def generate(config: GenConfig) -> FlowInstance:
    """
    按配置生成实例

    随机数的抽取顺序固定为: 连弧判定、容量、费用，各为一个 n×n 数组，
    只使用对角线以上的部分。该顺序是种子到实例映射的一部分，不要调整。
    """
    n = config.node_count
    rng = np.random.default_rng(config.seed)
    present = rng.random((n, n)) < config.density
    capacities = rng.integers(*config.capacity_range, size=(n, n), endpoint=True)
    costs = rng.integers(*config.cost_range, size=(n, n), endpoint=True)

    present = np.triu(present, k=1)
    chain = np.arange(n - 1)
    present[chain, chain + 1] = True

    tails, heads = np.nonzero(present)
    table = np.column_stack((tails + 1, heads + 1, capacities[tails, heads], costs[tails, heads]))

    if config.supply_mode is SupplyMode.FIXED:
        supply = config.supply
    else:
        supply = _max_flow_value(n, table)
    logger.info("生成实例: n=%d, 弧数=%d, 供给量=%d, 种子=%d", n, len(table), supply, config.seed)
    return FlowInstance(node_count=n, arcs=table, supply=supply)
