# State Redistribution Schemas
from .protocol_schema import (
    ProtocolConfig,
    ProtocolTranscript,
    StepRecord,
    PositionOperators,
    DecodingAnalysis,
    CostTrendPoint,
)
from .check_schema import CheckReport, SuiteReport, SweepPoint, SweepReport
from .io_schema import StateFile, RegisterEntry, RunReport, STATE_FILE_VERSION
