"""teammine: persistent team mining over timestamped co-authorship records.

The pipeline turns a corpus of publications into persistent teams and their
success statistics:

    publications -> pair timelines -> persistent collaboration network
                 -> temporal maximal cliques -> teams -> overlaps -> figures

Each stage lives in its own module and can be driven through the CLI
(``teammine --help``) or called directly.
"""

from teammine.errors import TeammineError

__version__ = "0.1.0"

__all__ = ["TeammineError", "__version__"]
