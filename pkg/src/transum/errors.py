"""Exception hierarchy. The CLI maps InputError to exit 2 and InvariantError to exit 3."""


class TransumError(Exception):
    pass


class InputError(TransumError):
    """Bad or unusable input: empty corpus, unknown term, oversized oracle instance..."""


class EmptyDocumentError(InputError):
    pass


class EmptyVocabularyError(InputError):
    pass


class UnknownTermError(InputError, KeyError):
    pass


class DegenerateCorpusError(InputError):
    pass


class SizeGuardError(InputError):
    pass


class InvariantError(TransumError):
    """An internal postcondition failed."""


class ConvergenceError(InvariantError):
    pass
