from btbd.core import CommandManager
from btbd.commands import Bd, Decode, Encode, Help, Stats, Synth


command_manager = CommandManager()
command_manager.register(Encode())
command_manager.register(Decode())
command_manager.register(Stats())
command_manager.register(Bd())
command_manager.register(Synth())
command_manager.register(Help(command_manager=command_manager))
