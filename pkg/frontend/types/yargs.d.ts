// Minimal declarations for the yargs API surface this package uses.
declare module "yargs" {
  export interface Arguments {
    _: (string | number)[];
    $0: string;
    [key: string]: unknown;
  }

  export interface Options {
    type?: "string" | "number" | "boolean";
    choices?: readonly string[];
    demandOption?: boolean;
    default?: unknown;
    describe?: string;
  }

  export interface Argv {
    scriptName(name: string): Argv;
    command(
      name: string,
      description: string,
      builder?: (y: Argv) => Argv,
    ): Argv;
    option(name: string, options: Options): Argv;
    demandCommand(min: number, message?: string): Argv;
    strict(): Argv;
    exitProcess(enabled: boolean): Argv;
    fail(handler: (msg: string | null, err?: Error) => void): Argv;
    parseSync(): Arguments;
  }

  function yargs(argv?: string[]): Argv;
  export default yargs;
}

declare module "yargs/helpers" {
  export function hideBin(argv: string[]): string[];
}
