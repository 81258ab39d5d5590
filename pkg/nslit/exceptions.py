class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NodeError(ArithmeticError):
    """The wave function vanishes where a guidance velocity was requested."""

    def __init__(self, x, z, modulus):
        super(NodeError, self).__init__('wave function node at x={!r} m, z={!r} m (|psi|={!r})'.format(x, z, modulus))
        self.x = x
        self.z = z
        self.modulus = modulus


class ArtifactError(OSError):
    """Reading or writing an artifact failed, carries the offending path."""

    def __init__(self, path, reason):
        super(ArtifactError, self).__init__('{}: {}'.format(path, reason))
        self.path = path
        self.reason = reason
