# Copyright 2026 The relmalcev Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from logging import Logger

import dataclasses
import enum
import json
import logging
import sys

import numpy as np


APP_VERSION = "0.1.0"
APP_NAME = "relmalcev"
LOG_LEVEL = logging._nameToLevel["INFO"]


class JsonEncoderStrFallback(json.JSONEncoder):
    def default(self, obj):
        try:
            if dataclasses.is_dataclass(obj):
                return dataclasses.asdict(obj)
            elif isinstance(obj, np.ndarray):
                return obj.tolist()
            elif isinstance(obj, np.generic):
                return obj.item()
            elif isinstance(obj, enum.Enum):
                return obj.value
            elif isinstance(obj, (set, frozenset)):
                return sorted(str(item) for item in obj)
            else:
                return super().default(obj)
        except TypeError as exc:
            if "not JSON serializable" in str(exc):
                return str(obj)
            raise


class JSONFormatter(logging.Formatter):
    def __init__(self):
        super().__init__()

    def format(self, record):
        try:
            message = json.loads(record.getMessage())
        except ValueError:
            message = record.getMessage()
        record.msg = json.dumps(message, cls=JsonEncoderStrFallback)
        record.args = ()
        return super().format(record)


def get_json_logger() -> Logger:
    json_logger = logging.getLogger(f"{APP_NAME}-json-logger")
    if not len(json_logger.handlers):
        json_logger.setLevel(LOG_LEVEL)
        logging_stream_handler = logging.StreamHandler(sys.stderr)
        logging_stream_handler.setFormatter(JSONFormatter())
        json_logger.addHandler(logging_stream_handler)
        json_logger.propagate = False
    return json_logger


def get_logger() -> Logger:
    logger = logging.getLogger(APP_NAME)
    if not len(logger.handlers):
        logger.setLevel(LOG_LEVEL)
        logging_stream_handler = logging.StreamHandler(sys.stderr)
        stream_formatter = logging.Formatter(
            "{asctime} {name} {levelname:8s} {message}", style="{"
        )
        logging_stream_handler.setFormatter(stream_formatter)
        logger.addHandler(logging_stream_handler)
    return logger
