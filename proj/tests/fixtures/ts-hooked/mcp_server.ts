// Registry glue between the wire layer and per-item handles.

interface RegisteredTool {
  title: string;
  enabled: boolean;
  update: (updates: ToolUpdate) => void;
  remove: () => void;
}

interface RegisteredEntry {
  uri: string;
  update: (updates: EntryUpdate) => void;
}

export class McpServer {
  private server: Server;
  private subscriptions = new Set<string>();
  private _tools = new Map<string, RegisteredTool>();
  private promptListDirty = false;

  isConnected(): boolean {
    return this.server != null;
  }

  sendToolListChanged() {
    if (this.isConnected()) {
      this.server.sendToolListChanged();
    }
  }

  sendResourceListChanged() {
    if (this.isConnected()) {
      this.server.sendResourceListChanged();
    }
  }

  sendPromptListChanged() {
    this.promptListDirty = true;
  }

  sendResourceUpdatedNotification(uri: string) {
    if (this.subscriptions.has(uri)) {
      this.server.sendResourceUpdatedNotification(uri);
    }
  }

  private _createRegisteredTool(
    name: string,
    title: string,
  ): RegisteredTool {
    const registeredTool: RegisteredTool = {
      title: title,
      enabled: true,
      update: (updates) => {
        if (typeof updates.enabled !== "undefined") registeredTool.enabled = updates.enabled
        this.sendToolListChanged()
      },
      remove: () => {
        this._tools.delete(name)
        this.sendToolListChanged()
      },
    };
    return registeredTool;
  }

  private _createRegisteredEntry(uri: string): RegisteredEntry {
    const registeredEntry: RegisteredEntry = {
      uri: uri,
      update: (updates) => {
        if (typeof updates.uri !== "undefined") registeredEntry.uri = updates.uri
        this.sendResourceListChanged()
      },
    };
    return registeredEntry;
  }
}
