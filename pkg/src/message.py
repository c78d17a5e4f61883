# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
This module implements the Message class and a few trivial subclasses.
Their purpose is to provide a uniform way of formatting problems found
by the checkers, the configuration loader and the dataset readers.

It also implements ToolkitError, the exception that carries a list of
Message objects, and its subclasses for each kind of failure the
algorithms can raise.
'''
import traceback


class Message:
    message_type = 'Message'

    def __init__(self,
            message=None,         # Message text
            message_source=None,  # Name of the check or function producing this message
            exc=None,             # Exception that was raised
            line_number=None,     # Line number (for errors in a line of a file)
            path=None,            # File the message pertains to
            element=None):        # ElementId the message pertains to
        self.message = message
        self.message_source = message_source
        self.path = path
        self.element = element
        self.line_number = line_number
        self.exc = exc
        self.caller = traceback.extract_stack(limit=2)[0].name
        # If you add another attribute, be sure to add it to __members()

    def format(self):
        '''
        Build and return a message string based on self's attribute values
        '''
        phrases = []
        if self.message_type:
            phrases.append('{}:'.format(self.message_type))
        if self.message_source:
            phrases.append('[{}]'.format(self.message_source))
        if self.path:
            phrases.append('{},'.format(self.path))
        if self.line_number:
            phrases.append('Line {},'.format(self.line_number))
        if self.element is not None:
            phrases.append('Element {}'.format(self.element))
        if self.message:
            phrases.append('{}{}.'.format(self.message[0].upper(), self.message[1:]))
        if self.exc:
            phrases.append('{}: {}'.format(type(self.exc).__name__, self.exc))
        return ' '.join(phrases)

    def __str__(self):
        return '<{}>'.format(self.message_type)

    def __repr__(self):
        return str(self)

    def __members(self):
        '''
        Two Message objects are "equal" if they have the same
        value for all of these attributes.
        '''
        return (self.message_type, self.message, self.message_source, self.caller,
                self.exc, self.line_number, self.path, self.element)

    def __eq__(self, other):
        if type(other) is type(self):
            return self.__members() == other.__members()
        else:
            return False

    def __hash__(self):
        '''
        Hash value consistent with "equality" condition.
        '''
        return hash(self.__members())



class ErrorMessage(Message):
    '''
    Base class for error message objects
    '''
    message_type = 'Error'

class DataError(ErrorMessage):
    message_type = 'Data Error'

class ConfigError(ErrorMessage):
    message_type = 'Config Error'

class InvariantError(ErrorMessage):
    message_type = 'Invariant Violation'

class BoundError(ErrorMessage):
    message_type = 'Bound Violation'

class SoftwareBug(ErrorMessage):
    message_type = 'Software Bug'

class InstanceWarning(Message):
    message_type = 'Instance Warning'



class ToolkitError(Exception):
    '''
    Exception that carries a list of Messages.

    Usage:
        errmsgs = [ConfigError('foo'), ConfigError('bar')]
        try:
            raise InvalidConfiguration(errmsgs)
        except ToolkitError as exc:
            error_messages = exc.error_messages

    A plain string is accepted too and wrapped in an ErrorMessage.
    '''
    message_class = ErrorMessage

    def __init__(self, *args):
        super().__init__(*args)
        first = args[0] if args else []
        if isinstance(first, str):
            first = [self.message_class(message=first)]
        elif isinstance(first, Message):
            first = [first]
        self.error_messages = list(first)

    def __str__(self):
        return '; '.join(errmsg.format() for errmsg in self.error_messages)


class PreconditionError(ToolkitError):
    'An operation was called outside its precondition'
    message_class = SoftwareBug

class DomainError(ToolkitError):
    'An element id lies outside the ground set'
    message_class = DataError

class InvalidConfiguration(ToolkitError):
    'A configuration, parameter or construction argument is invalid'
    message_class = ConfigError

class DuplicateElement(ToolkitError):
    'A stream delivered the same element twice'
    message_class = DataError

class RefusalError(ToolkitError):
    'An exhaustive computation was asked for on an input beyond its guardrail'

class MalformedFile(ToolkitError):
    'A dataset or configuration file could not be parsed'
    message_class = DataError
