"""
Thinbase, experiments on thin bases and square roots of finite groups.  Given a finite group it finds
small subsets X, Y with XY = G, deterministically through subgroups and quotients or at random, and
certifies every claimed cover by exhaustive multiplication.  Alongside are word maps and the
Waring problem for groups, character table class counts, permutation statistics of the alternating
groups, and the continuous analogue: square roots of the circle and tori of Minkowski dimension d/2.

Groups and character tables are JSON files, either paths or names from the shipped corpus, see
'thinbase corpus'.  Every subcommand writes a JSON report and exits with 0 when all of its
certifications passed, 1 when a result is uncertified, and 2 on bad input.
"""

import sys

from loguru import logger

from thinbase.harness import SUBCOMMANDS, run

DESCRIPTION = (
    __doc__
    + """
    The first argument should be one of the subcommands below, or 'help' to see this message.  For help
    on a subcommand call 'thinbase <subcommand> -h'.

"""
    + '\n'.join(f'    {name:<14}{summary}' for name, (summary, _, _) in SUBCOMMANDS.items())
)


def main():
    """
    Dispatch to a subcommand of thinbase.harness.
    """
    logger.remove()
    arg_list = sys.argv[1:]

    arg1 = None if len(arg_list) == 0 else arg_list[0]
    if arg1 in SUBCOMMANDS:
        sys.exit(run(arg1, arg_list[1:]))
    elif arg1 in ['-h', 'help', None]:
        print(DESCRIPTION)
    else:
        print(f'unknown subcommand {arg1}\n{DESCRIPTION}', file=sys.stderr)
        sys.exit(2)


if __name__ == '__main__':
    main()
