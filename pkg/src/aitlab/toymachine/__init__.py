from .complexity import (ComplexityRecord, Unresolved, coding_gap, incompressibility_census,
                         k_exact, kraft_sum, universal_probability)
from .enumeration import Census, Program, enumerate_programs, program_census
from .machine import INSTRUCTION_SET_VERSION, RunResult, Status, assemble, decode_run
from .predictor import Measure, predict_next, prediction_error_series
