"""
Command pipeline
"""

from .command_runner import COMMANDS, CommandOptions, CommandResult, CommandRunner, run_command

__all__ = ['COMMANDS', 'CommandOptions', 'CommandResult', 'CommandRunner', 'run_command']
