"""
异常定义 - 实例校验、文件解析与求解契约
"""
from typing import Optional


class InvalidInstanceError(ValueError):
    """FlowInstance 不满足不变式（弧方向、容量、费用、供给量等）"""


class ConfigError(ValueError):
    """生成器或运行配置取值非法"""


class InstanceFormatError(ValueError):
    """
    实例文件解析失败

    参数:
        message: 错误描述
        line: 出错行号（从 1 开始），未知时为 None
        token: 出错的 token，未知时为 None
    """

    def __init__(self, message: str, line: Optional[int] = None, token: Optional[str] = None):
        self.line = line
        self.token = token
        location = ""
        if line is not None:
            location += f"line {line}: "
        if token is not None:
            location += f"token {token!r}: "
        super().__init__(location + message)


class ContractError(RuntimeError):
    """调用违反前置条件（正常的启发式流程中不会触发）"""
