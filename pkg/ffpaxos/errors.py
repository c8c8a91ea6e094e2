"""
Exception hierarchy for ffpaxos.

Runtime protocol anomalies (an ANY on a classic round, two decided values)
are not raised: transition functions return them as Fault values so that
they end up in the trace where the monitors can see them.
"""


class FFPaxosError(Exception):
    """Base class for every error raised by the package"""


class ConfigError(FFPaxosError, ValueError):
    """Malformed configuration file or unknown key"""


class QuorumError(FFPaxosError, ValueError):
    """Malformed quorum system"""


class UsageError(FFPaxosError, ValueError):
    """Bad argument to an operation (unknown family, unknown scenario...)"""


class BoundExceededError(FFPaxosError):
    """An exhaustive enumeration was asked for beyond its configured bound"""

    def __init__(self, what: str, value: int, bound: int):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(f"{what}={value} exceeds the exhaustive bound {bound}")


class ProtocolError(FFPaxosError):
    """Precondition of a protocol operation violated by the caller"""


class InvalidSystemError(FFPaxosError):
    """A run was refused because its quorum system fails validation"""

    def __init__(self, report):
        self.report = report
        super().__init__(report.render())
