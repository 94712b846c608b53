import logging, sys, json
from datetime import datetime, timezone
from core.config import settings

# Attributes every LogRecord carries; anything else came in through `extra=`.
_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}


class JSONFormatter(logging.Formatter):
    def format(self, record):
        data={"timestamp":datetime.now(timezone.utc).isoformat().replace("+00:00","Z"),
              "level":record.levelname,"logger":record.name,"message":record.getMessage()}
        for key, value in record.__dict__.items():
            if key not in _RESERVED:
                data[key]=value
        return json.dumps(data, default=str)


class ExtrasFormatter(logging.Formatter):
    def format(self, record):
        line=super().format(record)
        extras={k:v for k,v in record.__dict__.items() if k not in _RESERVED}
        if extras:
            line+=" "+" ".join(f"{k}={v}" for k,v in extras.items())
        return line


def get_logger(name):
    logger=logging.getLogger(name)
    if not logger.handlers:
        logger.setLevel(settings.LOG_LEVEL)
        h=logging.StreamHandler(sys.stderr)
        if settings.ENV=="production":
            h.setFormatter(JSONFormatter())
        else:
            h.setFormatter(ExtrasFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
        logger.addHandler(h)
        logger.propagate=False
    return logger
