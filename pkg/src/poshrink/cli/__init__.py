from poshrink.cli.exceptions import IngestError, IngestParseError, IngestValidationError  # noqa
from poshrink.cli.ingest import CountTable, ingest_counts, parse_counts  # noqa
