#! /usr/bin/env python3

import json
from pathlib import Path


LOG_CONFIG_FILEPATH = Path(__file__).parent / 'log_config.json'


def provide_log_configuration(level: str = 'INFO') -> dict:
    """
    Logging configuration for the command line and the HTTP service:  records
        of the 'treadmill' logger go to standard error, so that standard output
        stays free for reports
    """

    assert level in ('DEBUG', 'INFO', 'WARNING', 'ERROR')

    log_configuration = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'default': {
                'format': '%(asctime)s; %(name)s; %(levelname)s; %(message)s'}},
        'handlers': {
            'console' : {
                'level': 'DEBUG',
                'class': 'logging.StreamHandler',
                'formatter': 'default',
                'stream': 'ext://sys.stderr'}},
        'loggers': {
            'treadmill': {
                'level': level,
                'handlers': ['console'],
                'propagate': False}}}

    return log_configuration


def main(log_config_filepath: Path = LOG_CONFIG_FILEPATH):
    """
    Set up logging configuration in a JSON file for the command line and the
        HTTP service
    """

    with open(log_config_filepath, 'w') as json_file:
        json.dump(provide_log_configuration(), json_file, indent=2)


if __name__ == '__main__':
    main()
